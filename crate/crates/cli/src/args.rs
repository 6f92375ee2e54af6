//! Value parsers for points and complex numbers given on the command line.

use std::str::FromStr;

use ainf::ImHPoint;
use num_complex::Complex64;

fn floats<const N: usize>(s: &str) -> Result<[f64; N], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != N {
        return Err(format!("expected {N} comma-separated numbers, got {s:?}"));
    }
    let mut out = [0.0; N];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = p.parse().map_err(|e| format!("{p:?}: {e}"))?;
    }
    Ok(out)
}

/// `t,re,im`.
#[derive(Debug, Clone, Copy)]
pub struct PointArg(pub ImHPoint);

impl FromStr for PointArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let [t, re, im] = floats::<3>(s)?;
        Ok(Self(ImHPoint::new(t, re, im)))
    }
}

/// `re,im`.
#[derive(Debug, Clone, Copy)]
pub struct ComplexArg(pub Complex64);

impl FromStr for ComplexArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let [re, im] = floats::<2>(s)?;
        Ok(Self(Complex64::new(re, im)))
    }
}
