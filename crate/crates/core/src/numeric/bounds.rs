use crate::poly::ceil_log2;
use crate::{Error, Result};

/// Precision thresholds derived from one bound `L`.
///
/// With `|x - xi| < 2^-L` for a root `xi` of `g`, a value `|f(x)|` is either
/// `< 2^-L` (then `f(xi) = 0`) or `> 2^-(L/4)`, so approximating `f(x)` to
/// `2^-(L/2)` decides whether `f` vanishes at `xi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundSet {
    pub l: u64,
}

impl BoundSet {
    pub fn zero_threshold_exp(&self) -> i64 {
        -(self.l as i64)
    }

    pub fn nonzero_threshold_exp(&self) -> i64 {
        -((self.l / 4) as i64)
    }

    pub fn decision_error_exp(&self) -> i64 {
        -((self.l / 2) as i64)
    }
}

/// `L = 128 n (ceil(log2(n+1)) + mu)` for two polynomials of degree `<= n`
/// with coefficients below `2^mu`.
pub fn eval_sep_bound(n: u64, mu: u64) -> Result<BoundSet> {
    let inner = ceil_log2(n.saturating_add(1)).checked_add(mu).ok_or(Error::BoundOverflow)?;
    let l = 128u64.checked_mul(n.max(1)).and_then(|v| v.checked_mul(inner)).ok_or(Error::BoundOverflow)?;
    Ok(BoundSet { l })
}

/// One `L` valid for every consecutive pair of the derivative chain of a
/// k-nomial of degree `n` with coefficients `<= 2^tau`:
/// `L = 128 n (tau + (k+1) ceil(log2(n+1)))`.
pub fn chain_bound(n: u64, tau: u64, k: u64) -> Result<BoundSet> {
    let ln = ceil_log2(n.saturating_add(1));
    let inner = k
        .checked_add(1)
        .and_then(|v| v.checked_mul(ln))
        .and_then(|v| v.checked_add(tau))
        .ok_or(Error::BoundOverflow)?;
    let l = 128u64.checked_mul(n.max(1)).and_then(|v| v.checked_mul(inner)).ok_or(Error::BoundOverflow)?;
    Ok(BoundSet { l })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(eval_sep_bound(2, 1).unwrap().l, 768);
        assert_eq!(eval_sep_bound(50, 2).unwrap().l, 51200);
        assert_eq!(eval_sep_bound(1, 1).unwrap().l, 256);
        assert_eq!(chain_bound(50, 2, 6).unwrap().l, 281_600);
        assert_eq!(chain_bound(1, 3, 2).unwrap().l, 128 * (3 + 3));
        let b = chain_bound(50, 2, 6).unwrap();
        assert_eq!((b.zero_threshold_exp(), b.nonzero_threshold_exp(), b.decision_error_exp()), (-281_600, -70_400, -140_800));
        assert_eq!(chain_bound(u64::MAX / 2, 5, 3), Err(Error::BoundOverflow));
    }
}
