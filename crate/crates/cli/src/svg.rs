//! A minimal static bar chart. The data it draws is embedded verbatim in a
//! `<metadata>` element so the picture can be checked against the CSV.

use std::fmt::Write;

const WIDTH: f64 = 480.0;
const HEIGHT: f64 = 340.0;
const LEFT: f64 = 64.0;
const RIGHT: f64 = 16.0;
const TOP: f64 = 20.0;
const BOTTOM: f64 = 56.0;

/// Bars at `(x label, value)`; `data` is embedded as-is.
pub fn bar_chart(bars: &[(u32, f64)], x_label: &str, y_label: &str, data: &str) -> String {
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let max = bars.iter().map(|b| b.1).fold(0.0, f64::max);
    let (step, top) = ticks(max);
    let y = |v: f64| TOP + plot_h * (1.0 - v / top);
    let slot = plot_w / bars.len().max(1) as f64;
    let bar_w = slot * 0.6;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, "<metadata>\n{}</metadata>", escape(data));
    let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let mut v = 0.0;
    while v <= top + step * 1e-9 {
        let yy = y(v);
        let _ =
            writeln!(s, r##"<line x1="{LEFT}" y1="{yy:.2}" x2="{:.2}" y2="{yy:.2}" stroke="#ddd"/>"##, WIDTH - RIGHT);
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            LEFT - 6.0,
            yy + 4.0,
            tick_label(v, step)
        );
        v += step;
    }
    for (i, &(label, value)) in bars.iter().enumerate() {
        let cx = LEFT + slot * (i as f64 + 0.5);
        let yy = y(value);
        let _ = writeln!(
            s,
            r##"<rect x="{:.2}" y="{yy:.2}" width="{bar_w:.2}" height="{:.2}" fill="#9ecae1" stroke="#1f4e9c"/>"##,
            cx - bar_w / 2.0,
            TOP + plot_h - yy
        );
        let _ = writeln!(s, r#"<text x="{cx:.2}" y="{:.2}" text-anchor="middle">{label}</text>"#, TOP + plot_h + 16.0);
    }
    let _ = writeln!(
        s,
        r#"<line x1="{LEFT}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black"/>"#,
        TOP + plot_h,
        WIDTH - RIGHT,
        TOP + plot_h
    );
    let _ = writeln!(s, r#"<line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{:.2}" stroke="black"/>"#, TOP + plot_h);
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 14.0,
        escape(x_label)
    );
    let _ = writeln!(
        s,
        r#"<text transform="translate(16 {:.2}) rotate(-90)" text-anchor="middle">{}</text>"#,
        TOP + plot_h / 2.0,
        escape(y_label)
    );
    s.push_str("</svg>\n");
    s
}

/// A 1-2-5 tick step giving at most about six gridlines, and the axis top.
fn ticks(max: f64) -> (f64, f64) {
    if max <= 0.0 {
        return (1.0, 1.0);
    }
    let raw = max / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0].into_iter().map(|m| m * mag).find(|&s| s >= raw).unwrap_or(10.0 * mag);
    (step, (max / step).ceil() * step)
}

fn tick_label(v: f64, step: f64) -> String {
    let decimals = if step >= 1.0 { 0 } else { (-step.log10().floor()) as usize };
    format!("{v:.decimals$}")
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
