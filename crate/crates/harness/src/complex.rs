//! Text form of complex numbers: `re±imi` with 17 significant digits.

use qorth::C64;

pub fn format_c64(z: C64) -> String {
    format!("{:.16e}{:+.16e}i", z.re, z.im)
}

/// Parses `a`, `bi`, `a+bi`, `a-bi`, `i`, `-i`, with exponents allowed in
/// either part (`1e-3-2.5e2i`).
pub fn parse_c64(s: &str) -> Result<C64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("cannot parse complex number '{s}'");
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i').or_else(|| t.strip_suffix('j')) else {
        return t.parse::<f64>().map(|re| C64::new(re, 0.0)).map_err(|_| bad());
    };
    // split at the last sign that is not the leading sign or an exponent sign
    let bytes = body.as_bytes();
    let mut split = None;
    for i in (1..bytes.len()).rev() {
        if (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E') {
            split = Some(i);
            break;
        }
    }
    let imag = |p: &str| -> Result<f64, String> {
        match p {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => p.parse::<f64>().map_err(|_| bad()),
        }
    };
    match split {
        Some(i) => {
            let re = body[..i].parse::<f64>().map_err(|_| bad())?;
            Ok(C64::new(re, imag(&body[i..])?))
        }
        None => Ok(C64::new(0.0, imag(body)?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        let cases = [
            ("0.5+0i", C64::new(0.5, 0.0)),
            ("-1", C64::new(-1.0, 0.0)),
            ("2i", C64::new(0.0, 2.0)),
            ("-i", C64::new(0.0, -1.0)),
            ("1e-3-2.5e2i", C64::new(1e-3, -250.0)),
            ("-1.5E+2+3e-1i", C64::new(-150.0, 0.3)),
            (" 1 - i ", C64::new(1.0, -1.0)),
        ];
        for (s, z) in cases {
            assert_eq!(parse_c64(s).unwrap(), z, "{s}");
        }
        for s in ["", "abc", "1+2", "1++2i", "i2"] {
            assert!(parse_c64(s).is_err(), "{s}");
        }
    }

    #[test]
    fn round_trip() {
        for z in [C64::new(0.1, -0.2), C64::new(-3e-200, 7e150), C64::new(1.0 / 3.0, 0.0)] {
            let s = format_c64(z);
            assert_eq!(parse_c64(&s).unwrap(), z, "{s}");
        }
        assert_eq!(
            format_c64(C64::new(1.0, -0.5)),
            "1.0000000000000000e0-5.0000000000000000e-1i"
        );
    }
}
