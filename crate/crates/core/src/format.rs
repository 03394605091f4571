/// A float with 17 significant digits in scientific notation, which
/// round-trips every `f64` exactly. Non-finite values print as `nan`,
/// `inf` and `-inf`.
pub fn fmt17(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "nan".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        assert_eq!(fmt17(0.9), "9.0000000000000002e-1");
        assert_eq!(fmt17(1.0), "1.0000000000000000e0");
        assert_eq!(fmt17(f64::INFINITY), "inf");
        assert_eq!(fmt17(f64::NEG_INFINITY), "-inf");
    }

    proptest! {
        #[test]
        fn round_trips(v in any::<f64>().prop_filter("finite", |v| v.is_finite())) {
            prop_assert_eq!(fmt17(v).parse::<f64>().unwrap().to_bits(), v.to_bits());
        }
    }
}
