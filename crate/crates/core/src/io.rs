//! CSV emission and the `ell,ellp,re,im` coefficient format.
//!
//! Floats are written in the shortest form that parses back to the same
//! value, with `.` as decimal separator.

use crate::error::{Error, Result};
use crate::spectrum::SpectralIndex;
use crate::zonal::ZonalSpectralData;
use num_complex::Complex64;
use std::io::{Read, Write};

/// Shortest round-trip decimal representation.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

/// A header plus rows of already formatted cells.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push_f64(&mut self, row: &[f64]) {
        self.push(row.iter().map(|&x| fmt_f64(x)).collect());
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.header.len(), "row width must match header");
        self.rows.push(row);
    }

    pub fn write<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.header).map_err(csv_err)?;
        for r in &self.rows {
            w.write_record(r).map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv is utf-8")
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

/// Reads `ell,ellp,re,im` rows (header required); repeated bidegrees add up.
pub fn read_coefficients<R: Read>(n: u32, input: R) -> Result<ZonalSpectralData> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let header: Vec<String> = rdr.headers().map_err(csv_err)?.iter().map(str::to_string).collect();
    if header != ["ell", "ellp", "re", "im"] {
        return Err(Error::Parse(format!("expected header ell,ellp,re,im, got {}", header.join(","))));
    }
    let mut pairs = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
        let field = |j: usize| rec.get(j).unwrap_or("");
        let bad = |j: usize| Error::Parse(format!("row {}: bad value '{}'", i + 2, field(j)));
        let ell: u32 = field(0).parse().map_err(|_| bad(0))?;
        let ellp: u32 = field(1).parse().map_err(|_| bad(1))?;
        let re: f64 = field(2).parse().map_err(|_| bad(2))?;
        let im: f64 = field(3).parse().map_err(|_| bad(3))?;
        if !(re.is_finite() && im.is_finite()) {
            return Err(Error::Parse(format!("row {}: non-finite coefficient", i + 2)));
        }
        pairs.push((SpectralIndex::new(ell, ellp), Complex64::new(re, im)));
    }
    Ok(ZonalSpectralData::from_pairs(n, pairs))
}

pub fn coefficients_table(u: &ZonalSpectralData) -> Table {
    let mut t = Table::new(&["ell", "ellp", "re", "im"]);
    for (b, c) in &u.coeffs {
        t.push(vec![b.ell.to_string(), b.ellp.to_string(), fmt_f64(c.re), fmt_f64(c.im)]);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1.0 / 3.0, 1e-300, 6.02214076e23, -0.0, 123456.789] {
            assert_eq!(fmt_f64(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
        }
        assert_eq!(fmt_f64(0.25), "0.25");
    }

    #[test]
    fn table_has_header() {
        let mut t = Table::new(&["t", "sup"]);
        t.push_f64(&[0.5, 2.0]);
        assert_eq!(t.to_csv_string(), "t,sup\n0.5,2.0\n");
    }

    #[test]
    fn coefficients_round_trip() {
        let u = ZonalSpectralData::from_pairs(
            2,
            [(SpectralIndex::new(3, 1), Complex64::new(0.1, -2.5)), (SpectralIndex::new(0, 0), Complex64::new(1.0, 0.0))],
        );
        let text = coefficients_table(&u).to_csv_string();
        assert_eq!(read_coefficients(2, text.as_bytes()).unwrap(), u);
    }

    #[test]
    fn coefficient_errors() {
        assert!(read_coefficients(1, "l,lp,re,im\n1,1,0,0\n".as_bytes()).is_err());
        assert!(read_coefficients(1, "ell,ellp,re,im\n1,-1,0,0\n".as_bytes()).is_err());
        assert!(read_coefficients(1, "ell,ellp,re,im\n1,1,nan,0\n".as_bytes()).is_err());
        let u = read_coefficients(1, "ell, ellp, re, im\n1, 1, 1.5, 0\n1,1,0.5,1\n".as_bytes()).unwrap();
        assert_eq!(u.get(SpectralIndex::new(1, 1)), Complex64::new(2.0, 1.0));
    }
}
