//! Locale-independent number formatting for tabular output.

/// Scientific notation with 9 significant digits, e.g. `2.35741000e0`.
///
/// Negative zero is printed as zero so that results differing only in the
/// sign of an exact zero serialize identically.
pub fn sci(x: f64) -> String {
    if x == 0.0 {
        return format!("{:.8e}", 0.0);
    }
    format!("{x:.8e}")
}

/// Joins already-formatted fields into one CSV record (no trailing newline).
pub fn csv_row<I, S>(fields: I) -> String
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut out = String::new();
    for (i, f) in fields.into_iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(f.as_ref());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(sci(2.35741), "2.35741000e0");
        assert_eq!(sci(-1234.5678912345), "-1.23456789e3");
        assert_eq!(sci(1e-300), "1.00000000e-300");
        assert_eq!(sci(-0.0), sci(0.0));
    }

    #[test]
    fn parses_back() {
        for x in [0.1, 3.0e-7, -42.0, 11.5287] {
            let y: f64 = sci(x).parse().unwrap();
            assert!((x - y).abs() <= 1e-8 * x.abs());
        }
    }

    #[test]
    fn row_joining() {
        assert_eq!(csv_row(["m", "x"]), "m,x");
        assert_eq!(csv_row(Vec::<String>::new()), "");
    }
}
