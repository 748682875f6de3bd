use std::io::Write;

use kernelforge::report::Check;
use serde::Serialize;
use serde_json::Value;

use crate::cli::Format;

#[derive(Debug, Serialize)]
pub struct EvalReport {
    pub command: Vec<String>,
    pub parameters: Value,
    pub items: Vec<Check>,
    pub pass: bool,
    /// Seconds; the only field that varies between identical runs.
    pub wall_time: f64,
}

impl EvalReport {
    pub fn new(command: Vec<String>, parameters: Value, items: Vec<Check>, wall_time: f64) -> Self {
        let pass = items.iter().all(|c| c.pass);
        Self { command, parameters, items, pass, wall_time }
    }

    pub fn write(&self, format: Format, out: &mut impl Write) -> std::io::Result<()> {
        match format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, self)?;
                writeln!(out)
            }
            Format::Csv => self.write_csv(out),
        }
    }

    fn write_csv(&self, out: &mut impl Write) -> std::io::Result<()> {
        // shortest round-trip form, exponent for small and large magnitudes; NaN is left empty
        let num = |x: f64| if x.is_nan() { String::new() } else { format!("{:?}", x + 0.0) };
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["item", "value_re", "value_im", "oracle_re", "oracle_im", "abs_err", "rel_err"])?;
        for c in &self.items {
            let (ore, oim) = c.oracle.map_or((String::new(), String::new()), |o| (num(o.re), num(o.im)));
            w.write_record([c.item.clone(), num(c.value.re), num(c.value.im), ore, oim, num(c.abs_err), num(c.rel_err)])?;
        }
        w.flush()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_columns() {
        let r = EvalReport::new(
            vec![],
            Value::Null,
            vec![Check::relative("a,b", 1.5, 1.5, 1e-9), Check::value("c", 2.0)],
            0.0,
        );
        let mut buf = Vec::new();
        r.write(Format::Csv, &mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "item,value_re,value_im,oracle_re,oracle_im,abs_err,rel_err");
        assert_eq!(lines[1], "\"a,b\",1.5,0.0,1.5,0.0,0.0,0.0");
        assert_eq!(lines[2], "c,2.0,0.0,,,,");
        assert!(r.pass);
    }
}
