use std::fmt;

use super::LinguisticError;

/// A linguistic value `(s_i, alpha)`: a term index on a scale of `g + 1`
/// terms plus a symbolic translation in `[-0.5, 0.5)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoTuple {
    term_index: usize,
    alpha: f64,
    granularity: usize,
}

/// Direction in which a modifier pushes a 2-tuple along its scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarity {
    TowardLow,
    TowardHigh,
}

impl Polarity {
    pub fn as_str(self) -> &'static str {
        match self {
            Polarity::TowardLow => "toward_low",
            Polarity::TowardHigh => "toward_high",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "toward_low" => Some(Polarity::TowardLow),
            "toward_high" => Some(Polarity::TowardHigh),
            _ => None,
        }
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl TwoTuple {
    /// Builds a 2-tuple, checking index and translation bounds.
    pub fn new(term_index: usize, alpha: f64, granularity: usize) -> Result<Self, LinguisticError> {
        if granularity == 0 {
            return Err(LinguisticError::Granularity);
        }
        if term_index > granularity {
            return Err(LinguisticError::TermIndex {
                index: term_index,
                granularity,
            });
        }
        if !(-0.5..0.5).contains(&alpha) {
            return Err(LinguisticError::Alpha(alpha));
        }
        let beta = term_index as f64 + alpha;
        if beta < 0.0 || beta > granularity as f64 {
            return Err(LinguisticError::BetaOutOfScale {
                beta,
                granularity,
            });
        }
        Ok(TwoTuple {
            term_index,
            alpha,
            granularity,
        })
    }

    pub fn term_index(&self) -> usize {
        self.term_index
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Index of the last term of the scale.
    pub fn granularity(&self) -> usize {
        self.granularity
    }

    /// The symbolic value `beta = i + alpha`.
    pub fn beta(&self) -> f64 {
        delta_inv(self)
    }
}

impl fmt::Display for TwoTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(s{}, {})", self.term_index, self.alpha)
    }
}

/// Maps a symbolic value `beta` in `[0, g]` to its 2-tuple.
///
/// The nearest term is chosen with round-half-up, so `beta = i + 0.5`
/// becomes `(s_{i+1}, -0.5)`.
pub fn delta(beta: f64, g: usize) -> Result<TwoTuple, LinguisticError> {
    if g == 0 {
        return Err(LinguisticError::Granularity);
    }
    if beta.is_nan() {
        return Err(LinguisticError::NotANumber);
    }
    if beta < 0.0 {
        return Err(LinguisticError::BetaBelowZero(beta));
    }
    if beta > g as f64 {
        return Err(LinguisticError::BetaAboveScale { beta, granularity: g });
    }
    // f64::round rounds half away from zero, i.e. half-up for beta >= 0.
    let index = beta.round();
    Ok(TwoTuple {
        term_index: index as usize,
        alpha: beta - index,
        granularity: g,
    })
}

/// Inverse of [`delta`]: `i + alpha`.
pub fn delta_inv(t: &TwoTuple) -> f64 {
    t.term_index as f64 + t.alpha
}

/// Shifts a 2-tuple by `amount` along its scale and re-normalises it.
///
/// `TowardLow` subtracts, `TowardHigh` adds. A negative amount moves the
/// other way. The shifted value is clamped to `[0, g]`.
pub fn apply_modifier(t: &TwoTuple, amount: f64, polarity: Polarity) -> TwoTuple {
    let g = t.granularity as f64;
    let shifted = match polarity {
        Polarity::TowardLow => t.beta() - amount,
        Polarity::TowardHigh => t.beta() + amount,
    };
    let clamped = if shifted.is_nan() { t.beta() } else { shifted.clamp(0.0, g) };
    delta(clamped, t.granularity).expect("clamped beta lies on the scale")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_on_integer_is_identity() {
        let t = delta(2.0, 4).unwrap();
        assert_eq!(t.term_index(), 2);
        assert_eq!(t.alpha(), 0.0);
    }

    #[test]
    fn delta_rounds_to_nearest_term() {
        let t = delta(2.6, 4).unwrap();
        assert_eq!(t.term_index(), 3);
        assert!((t.alpha() + 0.4).abs() < 1e-12);
        assert_eq!(delta_inv(&t), 2.6);
    }

    #[test]
    fn delta_breaks_ties_upward() {
        let t = delta(1.5, 4).unwrap();
        assert_eq!(t.term_index(), 2);
        assert_eq!(t.alpha(), -0.5);
    }

    #[test]
    fn delta_roundtrip_through_inverse() {
        let t = TwoTuple::new(1, 0.25, 4).unwrap();
        assert_eq!(delta(delta_inv(&t), 4).unwrap(), t);
    }

    #[test]
    fn delta_inv_examples() {
        assert_eq!(delta_inv(&TwoTuple::new(0, 0.0, 4).unwrap()), 0.0);
        assert_eq!(delta_inv(&TwoTuple::new(3, -0.4, 4).unwrap()), 2.6);
        assert_eq!(delta_inv(&TwoTuple::new(4, 0.0, 4).unwrap()), 4.0);
    }

    #[test]
    fn delta_rejects_out_of_scale() {
        assert!(matches!(delta(-0.1, 4), Err(LinguisticError::BetaBelowZero(_))));
        assert!(matches!(
            delta(4.01, 4),
            Err(LinguisticError::BetaAboveScale { .. })
        ));
        assert!(matches!(delta(f64::NAN, 4), Err(LinguisticError::NotANumber)));
    }

    #[test]
    fn constructor_checks_bounds() {
        assert!(TwoTuple::new(0, -0.1, 4).is_err());
        assert!(TwoTuple::new(4, 0.1, 4).is_err());
        assert!(TwoTuple::new(2, 0.5, 4).is_err());
        assert!(TwoTuple::new(5, 0.0, 4).is_err());
        assert!(TwoTuple::new(2, -0.5, 4).is_ok());
    }

    #[test]
    fn modifier_moves_and_clamps() {
        let near = TwoTuple::new(2, 0.0, 4).unwrap();
        assert_eq!(apply_modifier(&near, 0.0, Polarity::TowardLow), near);
        let weakened = apply_modifier(&near, 0.5, Polarity::TowardLow);
        assert_eq!((weakened.term_index(), weakened.alpha()), (2, -0.5));

        let top = TwoTuple::new(4, 0.0, 4).unwrap();
        assert_eq!(apply_modifier(&top, 0.5, Polarity::TowardHigh), top);
        let bottom = TwoTuple::new(0, 0.0, 4).unwrap();
        assert_eq!(apply_modifier(&bottom, 1.0, Polarity::TowardLow), bottom);
    }
}
