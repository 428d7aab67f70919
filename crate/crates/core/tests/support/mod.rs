pub mod cubic_oracle;
