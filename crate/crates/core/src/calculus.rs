//! Closed homology-series identities: the degree-shift relation between
//! Hochschild and cyclic series, Koszul-duality index remaps, the HKR
//! series, tensor products, strongly-free quotient series, and the
//! closed-form predictions for generic quadratic and symmetric forms.
//!
//! Duality is implemented as index transport on slots, never as a formal
//! substitution of `1/x`; the equivalence of the two descriptions is an
//! invariant checked in tests, not a mechanism.

use thiserror::Error;

use crate::scalar::{Parity, Scalar};
use crate::series::{SeriesError, SignedSeries, TriSeries};
use crate::transforms::{hcfree, TransformError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CalculusError {
    #[error("series is supported outside the cyclic region (n <= q-1): slot (n={n}, q={q}, eps={eps})")]
    NotCyclicSupport { n: u32, q: u32, eps: Parity },
    #[error("not divisible by 1+xy: residue {value} at slot (n={n}, q={q}, eps={eps})")]
    NotDivisible {
        n: u32,
        q: u32,
        eps: Parity,
        value: String,
    },
    #[error("constant term of a Hochschild series must be 1")]
    ConstantTermNotOne,
    #[error("parameter constraint violated: {0}")]
    ConstraintViolation(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Transform(#[from] TransformError),
}

/// Index transport between the homology series of an algebra and of its
/// quadratic dual.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DualityRemap {
    /// `(n, q, eps) -> (q - n, q, eps)` on Hochschild tables.
    HhDual,
    /// `(n, q, eps) -> (q - n - 1, q, eps + 1)` on cyclic tables.
    HcDual,
}

fn check_cyclic_support<T: Scalar>(hc: &TriSeries<T>) -> Result<(), CalculusError> {
    for (n, q, eps, _) in hc.iter_nonzero() {
        if n >= q {
            return Err(CalculusError::NotCyclicSupport { n, q, eps });
        }
    }
    Ok(())
}

/// `HH = 1 + (1+xy) HC`, slotwise:
/// `HH_{n,q,eps} = HC_{n,q,eps} + HC_{n-1,q,eps+1}` plus 1 at `(0,0,0)`.
pub fn hh_from_hc<T: Scalar>(hc: &TriSeries<T>) -> Result<TriSeries<T>, CalculusError> {
    check_cyclic_support(hc)?;
    let mut hh = TriSeries::one(hc.trunc());
    for (n, q, eps, v) in hc.iter_nonzero() {
        hh.add_to(n, q, eps, v.clone());
        hh.add_to(n + 1, q, eps.flip(), v.clone());
    }
    Ok(hh)
}

/// Inverse of [`hh_from_hc`]: the unique solution of
/// `HC_{n,q,eps} = HH_{n,q,eps} - HC_{n-1,q,eps+1}` with `HC_{-1} = 0`.
/// Consistency demands `HC_{n,q,.} = 0` for `n >= q`; a nonzero residue
/// there means the input was not divisible by `1+xy` and is reported with
/// the offending slot.
pub fn hc_from_hh<T: Scalar>(hh: &TriSeries<T>) -> Result<TriSeries<T>, CalculusError> {
    if !hh.get(0, 0, Parity::Even).is_one() || !hh.get(0, 0, Parity::Odd).is_zero() {
        return Err(CalculusError::ConstantTermNotOne);
    }
    let trunc = hh.trunc();
    let mut hc = TriSeries::zero(trunc);
    for q in 1..=trunc {
        let mut prev = [T::zero(), T::zero()]; // HC_{n-1,q,even|odd}
        for n in 0..=q {
            let mut cur = [T::zero(), T::zero()];
            for (i, eps) in [Parity::Even, Parity::Odd].into_iter().enumerate() {
                let v = hh.get(n, q, eps) - prev[1 - i].clone();
                if !v.is_zero() {
                    if n >= q {
                        return Err(CalculusError::NotDivisible {
                            n,
                            q,
                            eps,
                            value: v.to_string(),
                        });
                    }
                    hc.add_to(n, q, eps, v.clone());
                }
                cur[i] = v;
            }
            prev = cur;
        }
    }
    Ok(hc)
}

/// Coefficient transport along a duality remap.
pub fn koszul_dual<T: Scalar>(
    series: &TriSeries<T>,
    remap: DualityRemap,
) -> Result<TriSeries<T>, CalculusError> {
    let mut out = TriSeries::zero(series.trunc());
    for (n, q, eps, v) in series.iter_nonzero() {
        match remap {
            DualityRemap::HhDual => out.add_to(q - n, q, eps, v.clone()),
            DualityRemap::HcDual => {
                if n >= q {
                    return Err(CalculusError::NotCyclicSupport { n, q, eps });
                }
                out.add_to(q - n - 1, q, eps.flip(), v.clone());
            }
        }
    }
    Ok(out)
}

/// Hochschild series of a tensor product of commutative algebras.
/// Commutativity of the underlying algebras is the caller's assertion.
pub fn tensor_hh<T: Scalar>(hh_a: &TriSeries<T>, hh_b: &TriSeries<T>) -> TriSeries<T> {
    hh_a * hh_b
}

/// `(1 + yxz)^n / (1 - z)^n`: the Hochschild series of a polynomial ring on
/// `n` even weight-one variables.
pub fn hkr<T: Scalar>(n: u32, trunc: u32) -> TriSeries<T> {
    let num = &TriSeries::one(trunc) + &TriSeries::term(T::one(), 1, 1, Parity::Odd, trunc);
    let mut den = TriSeries::one(trunc);
    den.add_to(0, 1, Parity::Even, -T::one());
    &num.pow(n) * &den.pow(n).invert_unit().expect("unit constant")
}

/// `(1 + yz)^n / (1 - xz)^n`: the Hochschild series of an exterior algebra
/// on `n` odd weight-one variables.
pub fn exterior_hh<T: Scalar>(n: u32, trunc: u32) -> TriSeries<T> {
    let num = &TriSeries::one(trunc) + &TriSeries::term(T::one(), 0, 1, Parity::Odd, trunc);
    let mut den = TriSeries::one(trunc);
    den.add_to(1, 1, Parity::Even, -T::one());
    &num.pow(n) * &den.pow(n).invert_unit().expect("unit constant")
}

/// Extract the diagonal slots `(q, q, eps)` as a two-variable series.
pub fn diag_hh<T: Scalar>(hh: &TriSeries<T>) -> SignedSeries<T> {
    let mut out = SignedSeries::zero(hh.trunc());
    for (n, q, eps, v) in hh.iter_nonzero() {
        if n == q {
            out.add_to(q, eps, v.clone());
        }
    }
    out
}

/// Hilbert series `B = A / (1 + omega A)` of the quotient by a strongly
/// free set with series `omega`; for `A = T(V)` this is `1/(1 - V + omega)`.
/// Whether the set really is strongly free is the caller's claim, testable
/// against the oracle.
pub fn quotient_series_strongly_free<T: Scalar>(
    a: &SignedSeries<T>,
    omega: &SignedSeries<T>,
) -> Result<SignedSeries<T>, CalculusError> {
    if !a.has_constant_one() {
        return Err(CalculusError::ConstantTermNotOne);
    }
    if !omega.has_zero_constant() {
        return Err(CalculusError::Transform(TransformError::ConstantTermNotZero));
    }
    let denom = &SignedSeries::one(a.trunc().min(omega.trunc())) + &(omega * a);
    Ok(a * &denom.invert()?)
}

/// Series `1 + z^w y^s A` of the twisted extension attached to a cycle of
/// degree `(w, s)`.
pub fn a_omega_series<T: Scalar>(
    a: &SignedSeries<T>,
    omega_deg: (u32, Parity),
) -> Result<SignedSeries<T>, CalculusError> {
    if !a.has_constant_one() {
        return Err(CalculusError::ConstantTermNotOne);
    }
    let (w, s) = omega_deg;
    let shift = SignedSeries::term(T::one(), w, s, a.trunc());
    Ok(&SignedSeries::one(a.trunc()) + &(&shift * a))
}

/// Cyclic series of `T(V)/(omega)` for a strongly free set `omega`:
/// zero above homological degree one, `hc1` at degree one, and
/// `y hc1 + hcfree(V - omega)` at degree zero (`hc1 = 0` in the monomial
/// case).
pub fn freeset_hc<T: Scalar>(
    v: &SignedSeries<T>,
    omega: &SignedSeries<T>,
    hc1: &SignedSeries<T>,
) -> Result<TriSeries<T>, CalculusError> {
    let level0 = &hc1.mul_y() + &hcfree(&(v - omega))?;
    let mut out = TriSeries::from_signed(&level0);
    out = &out + &TriSeries::from_signed_at(hc1, 1, false)?;
    Ok(out)
}

/// Cyclic series of `T(V)/(g)` for one generic quadratic form in `n >= 2`
/// odd weight-one variables: concentrated in homological degree zero.
pub fn generic_quadratic<T: Scalar>(n: u32, trunc: u32) -> Result<TriSeries<T>, CalculusError> {
    if n < 2 {
        return Err(CalculusError::ConstraintViolation(format!(
            "generic quadratic form needs n >= 2 variables, got n = {n}"
        )));
    }
    let v = SignedSeries::term(T::from_u32(n).unwrap(), 1, Parity::Odd, trunc);
    let omega = SignedSeries::term(T::one(), 2, Parity::Even, trunc);
    freeset_hc(&v, &omega, &SignedSeries::zero(trunc))
}

/// Cyclic series for one generic *symmetric* quadratic form in `n >= 3` odd
/// weight-one variables: degree one contributes `y z^2`.
pub fn generic_symmetric<T: Scalar>(n: u32, trunc: u32) -> Result<TriSeries<T>, CalculusError> {
    if n < 3 {
        return Err(CalculusError::ConstraintViolation(format!(
            "generic symmetric form needs n >= 3 variables, got n = {n}"
        )));
    }
    generic_symmetric_many(n, 1, 1, 1, trunc)
}

/// `r` generic symmetric quadratic forms in `n` odd weight-one variables,
/// valid when `r <= j*k` and `j + k + j*k <= n` for some positive `j, k`.
pub fn generic_symmetric_many<T: Scalar>(
    n: u32,
    r: u32,
    j: u32,
    k: u32,
    trunc: u32,
) -> Result<TriSeries<T>, CalculusError> {
    if j < 1 || k < 1 {
        return Err(CalculusError::ConstraintViolation(format!(
            "witness parameters must be positive: j = {j}, k = {k}"
        )));
    }
    if r > j * k {
        return Err(CalculusError::ConstraintViolation(format!(
            "r <= j*k violated: r = {r}, j*k = {}",
            j * k
        )));
    }
    if j + k + j * k > n {
        return Err(CalculusError::ConstraintViolation(format!(
            "j + k + j*k <= n violated: j + k + j*k = {}, n = {n}",
            j + k + j * k
        )));
    }
    let v = SignedSeries::term(T::from_u32(n).unwrap(), 1, Parity::Odd, trunc);
    let omega = SignedSeries::term(T::from_u32(r).unwrap(), 2, Parity::Even, trunc);
    let hc1 = SignedSeries::term(T::from_u32(r).unwrap(), 2, Parity::Odd, trunc);
    freeset_hc(&v, &omega, &hc1)
}

/// Koszul-dual statement of [`generic_symmetric_many`]: the cyclic series
/// of a polynomial ring on `n` even weight-one variables modulo
/// `C(n+1,2) - r` generic quadratic relations. With
/// `hcfree(nzy - rz^2) = sum a_i z^i + y sum b_i z^i` the series is
/// `r z^2 + r xy z^2 + sum b_i x^{i-1} z^i + y sum a_i x^{i-1} z^i`.
pub fn polynomial_generic<T: Scalar>(
    n: u32,
    r: u32,
    j: u32,
    k: u32,
    trunc: u32,
) -> Result<TriSeries<T>, CalculusError> {
    // same witness constraints as the symmetric statement
    generic_symmetric_many::<T>(n, r, j, k, trunc)?;
    let mut v = SignedSeries::term(T::from_u32(n).unwrap(), 1, Parity::Odd, trunc);
    v.add_to(2, Parity::Even, -T::from_u32(r).unwrap());
    let h = hcfree(&v)?;
    let mut out = TriSeries::zero(trunc);
    out.add_to(0, 2, Parity::Even, T::from_u32(r).unwrap());
    out.add_to(1, 2, Parity::Odd, T::from_u32(r).unwrap());
    for (q, eps, c) in h.iter_nonzero() {
        // a_i lands in the odd part at x^{i-1}, b_i in the even part
        out.add_to(q - 1, q, eps.flip(), c.clone());
    }
    Ok(out)
}

/// The four one-relator cases excluded from the generic statements: a
/// squared variable or a commutator of two variables, in all-even or
/// all-odd alphabets.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ExceptionalCase {
    /// `(T_1^2)`, even variables.
    A0,
    /// `(T_1^2)`, odd variables.
    A1,
    /// `([T_1, T_2])`, even variables.
    B0,
    /// `([T_1, T_2])`, odd variables.
    B1,
}

impl ExceptionalCase {
    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "a0" => Some(Self::A0),
            "a1" => Some(Self::A1),
            "b0" => Some(Self::B0),
            "b1" => Some(Self::B1),
            _ => None,
        }
    }

    pub fn min_generators(self) -> u32 {
        match self {
            Self::A0 | Self::A1 => 1,
            Self::B0 | Self::B1 => 2,
        }
    }
}

impl std::fmt::Display for ExceptionalCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Self::A0 => "A0",
            Self::A1 => "A1",
            Self::B0 => "B0",
            Self::B1 => "B1",
        };
        f.write_str(s)
    }
}

/// Closed cyclic series for the exceptional one-relator quotients on `n`
/// generators.
pub fn exceptional<T: Scalar>(
    case: ExceptionalCase,
    n: u32,
    trunc: u32,
) -> Result<TriSeries<T>, CalculusError> {
    if n < case.min_generators() {
        return Err(CalculusError::ConstraintViolation(format!(
            "case {case} needs n >= {} generators, got n = {n}",
            case.min_generators()
        )));
    }
    let m = T::from_u32(n - case.min_generators()).unwrap();
    let one = T::one();
    let mut out = TriSeries::zero(trunc);
    match case {
        ExceptionalCase::A0 => {
            // z/(1 - x^2 z^2) + hcfree((n-1)z + (n-1)z^2)
            let mut j = 0;
            while 2 * j + 1 <= trunc {
                out.add_to(2 * j, 2 * j + 1, Parity::Even, one.clone());
                j += 1;
            }
            let mut v = SignedSeries::term(m.clone(), 1, Parity::Even, trunc);
            v.add_to(2, Parity::Even, m);
            out = &out + &TriSeries::from_signed(&hcfree(&v)?);
        }
        ExceptionalCase::A1 => {
            // yz/(1 - xz) + hcfree((n-1)yz + (n-1)z^2)
            let mut j = 0;
            while j + 1 <= trunc {
                out.add_to(j, j + 1, Parity::Odd, one.clone());
                j += 1;
            }
            let mut v = SignedSeries::term(m.clone(), 1, Parity::Odd, trunc);
            v.add_to(2, Parity::Even, m);
            out = &out + &TriSeries::from_signed(&hcfree(&v)?);
        }
        ExceptionalCase::B0 => {
            // z^2/(1-z)^2 + yxz^2/(1-z)^2 + hcfree(nz - z^2)
            let base = {
                let d = &SignedSeries::one(trunc)
                    - &SignedSeries::term(one.clone(), 1, Parity::Even, trunc);
                let sq = SignedSeries::term(one.clone(), 2, Parity::Even, trunc);
                &sq * &d.pow(2).invert()?
            };
            out = &TriSeries::from_signed(&base) + &TriSeries::from_signed_at(&base, 1, true)?;
            let mut v = SignedSeries::term(T::from_u32(n).unwrap(), 1, Parity::Even, trunc);
            v.add_to(2, Parity::Even, -one);
            out = &out + &TriSeries::from_signed(&hcfree(&v)?);
        }
        ExceptionalCase::B1 => {
            // z^2/(1-z^2)^2 + yxz^2/(1-z^2)^2 + hcfree(nyz - z^2); the
            // standalone terms carry the commutator class, the rest is the
            // trace series of the strongly free quotient
            let base = {
                let d = &SignedSeries::one(trunc)
                    - &SignedSeries::term(one.clone(), 2, Parity::Even, trunc);
                let sq = SignedSeries::term(one.clone(), 2, Parity::Even, trunc);
                &sq * &d.pow(2).invert()?
            };
            out = &TriSeries::from_signed(&base) + &TriSeries::from_signed_at(&base, 1, true)?;
            let mut v = SignedSeries::term(T::from_u32(n).unwrap(), 1, Parity::Odd, trunc);
            v.add_to(2, Parity::Even, -one);
            out = &out + &TriSeries::from_signed(&hcfree(&v)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Rat, RatSeries, RatTriSeries};
    use num_traits::{FromPrimitive, One, Zero};

    fn r(n: i64) -> Rat {
        Rat::from_i64(n).unwrap()
    }

    #[test]
    fn hh_from_zero_hc_is_one() {
        let hc = RatTriSeries::zero(6);
        assert_eq!(hh_from_hc(&hc).unwrap(), RatTriSeries::one(6));
    }

    #[test]
    fn hh_from_single_odd_class() {
        // HC = yz gives HH = 1 + yz + xz
        let hc = RatTriSeries::term(Rat::one(), 0, 1, Parity::Odd, 6);
        let hh = hh_from_hc(&hc).unwrap();
        let mut expect = RatTriSeries::one(6);
        expect.add_to(0, 1, Parity::Odd, Rat::one());
        expect.add_to(1, 1, Parity::Even, Rat::one());
        assert_eq!(hh, expect);
    }

    #[test]
    fn hh_from_hc_rejects_bad_support() {
        let hc = RatTriSeries::term(Rat::one(), 1, 1, Parity::Even, 6);
        assert!(matches!(
            hh_from_hc(&hc),
            Err(CalculusError::NotCyclicSupport { n: 1, q: 1, .. })
        ));
    }

    #[test]
    fn commutative_plane_shift_relation() {
        // HC(B0, n=2) = (2z - z^2 + xyz^2)/(1-z)^2 turns into
        // HH = (1+xyz)^2/(1-z)^2 under the shift relation
        let n = 8;
        let hc = exceptional::<Rat>(ExceptionalCase::B0, 2, n).unwrap();
        assert_eq!(hh_from_hc(&hc).unwrap(), hkr::<Rat>(2, n));
        // and back
        assert_eq!(hc_from_hh(&hkr::<Rat>(2, n)).unwrap(), hc);
    }

    #[test]
    fn hc_from_hh_line() {
        // HH of one even polynomial variable: (1+yxz)/(1-z); its cyclic
        // series is one even class in each positive weight
        let n = 7;
        let hh = hkr::<Rat>(1, n);
        let hc = hc_from_hh(&hh).unwrap();
        let mut expect = RatTriSeries::zero(n);
        for q in 1..=n {
            expect.add_to(0, q, Parity::Even, Rat::one());
        }
        assert_eq!(hc, expect);
        assert_eq!(hh_from_hc(&hc).unwrap(), hh);
    }

    #[test]
    fn hc_from_hh_reports_non_divisible() {
        // xz^1 alone is not of the form 1 + (1+xy) HC
        let mut hh = RatTriSeries::one(5);
        hh.add_to(1, 1, Parity::Even, Rat::one());
        assert!(matches!(
            hc_from_hh(&hh),
            Err(CalculusError::NotDivisible { q: 1, .. })
        ));
    }

    #[test]
    fn koszul_dual_polynomial_to_exterior() {
        let n = 7;
        assert_eq!(
            koszul_dual(&hkr::<Rat>(2, n), DualityRemap::HhDual).unwrap(),
            exterior_hh::<Rat>(2, n)
        );
        // the remap is an involution
        let twice = koszul_dual(
            &koszul_dual(&hkr::<Rat>(3, n), DualityRemap::HhDual).unwrap(),
            DualityRemap::HhDual,
        )
        .unwrap();
        assert_eq!(twice, hkr::<Rat>(3, n));
    }

    #[test]
    fn koszul_dual_hc_example() {
        // HC of the even one-relator square at n=1 is z/(1-x^2 z^2); its
        // dual is the free line on one odd generator, yz/(1-z^2)
        let n = 9;
        let mut hc = RatTriSeries::zero(n);
        let mut j = 0;
        while 2 * j + 1 <= n {
            hc.add_to(2 * j, 2 * j + 1, Parity::Even, Rat::one());
            j += 1;
        }
        let dual = koszul_dual(&hc, DualityRemap::HcDual).unwrap();
        let mut expect = RatTriSeries::zero(n);
        let mut q = 1;
        while q <= n {
            expect.add_to(0, q, Parity::Odd, Rat::one());
            q += 2;
        }
        assert_eq!(dual, expect);
        // involution on cyclic tables
        assert_eq!(
            koszul_dual(&dual, DualityRemap::HcDual).unwrap(),
            hc
        );
    }

    #[test]
    fn tensor_multiplicativity() {
        let n = 6;
        assert_eq!(
            tensor_hh(&hkr::<Rat>(1, n), &hkr::<Rat>(1, n)),
            hkr::<Rat>(2, n)
        );
        assert_eq!(
            tensor_hh(&hkr::<Rat>(2, n), &RatTriSeries::one(n)),
            hkr::<Rat>(2, n)
        );
    }

    #[test]
    fn hkr_low_weight_slots() {
        let h = hkr::<Rat>(1, 4);
        // weight-2 slots of (1+yxz)(1+z+z^2+...): (0,2,0) = 1 and (1,2,1) = 1
        assert_eq!(h.get(0, 2, Parity::Even), Rat::one());
        assert_eq!(h.get(1, 2, Parity::Odd), Rat::one());
        assert_eq!(h.get(1, 2, Parity::Even), Rat::zero());
    }

    #[test]
    fn diag_of_one() {
        assert_eq!(
            diag_hh(&RatTriSeries::one(5)),
            RatSeries::one(5)
        );
    }

    #[test]
    fn quotient_series_examples() {
        let n = 10;
        // omega = 0 returns A
        let a = (&RatSeries::one(n) - &RatSeries::term(r(2), 1, Parity::Even, n))
            .invert()
            .unwrap();
        assert_eq!(
            quotient_series_strongly_free(&a, &RatSeries::zero(n)).unwrap(),
            a
        );
        // free on two generators modulo one weight-2 element: 1/(1-2z+z^2)
        let omega = RatSeries::term(Rat::one(), 2, Parity::Even, n);
        let b = quotient_series_strongly_free(&a, &omega).unwrap();
        let mut denom = RatSeries::one(n);
        denom.add_to(1, Parity::Even, r(-2));
        denom.add_to(2, Parity::Even, Rat::one());
        assert_eq!(b, denom.invert().unwrap());
        // a two-element set: B = A/(1 + w1 A + w2 A)
        let w1 = RatSeries::term(Rat::one(), 2, Parity::Even, n);
        let w2 = RatSeries::term(Rat::one(), 3, Parity::Even, n);
        let omega2 = &w1 + &w2;
        let direct = quotient_series_strongly_free(&a, &omega2).unwrap();
        let denom2 = &(&RatSeries::one(n) + &(&w1 * &a)) + &(&w2 * &a);
        assert_eq!(direct, &a * &denom2.invert().unwrap());
    }

    #[test]
    fn twisted_extension_series() {
        let n = 8;
        // A = 1: just 1 + z^w y^s
        let one = RatSeries::one(n);
        let got = a_omega_series(&one, (3, Parity::Odd)).unwrap();
        let expect = &one + &RatSeries::term(Rat::one(), 3, Parity::Odd, n);
        assert_eq!(got, expect);

        // A = 1/(1-2z), degree (2, even): 1 + z^2/(1-2z)
        let a = (&RatSeries::one(n) - &RatSeries::term(r(2), 1, Parity::Even, n))
            .invert()
            .unwrap();
        let got = a_omega_series(&a, (2, Parity::Even)).unwrap();
        let expect = &RatSeries::one(n) + &(&RatSeries::term(Rat::one(), 2, Parity::Even, n) * &a);
        assert_eq!(got, expect);

        // tensor algebra on the shifted quotient: 1/(1 - w B) = 1 + w A when
        // the quotient attains the strongly free series
        let omega = RatSeries::term(Rat::one(), 2, Parity::Even, 12);
        let a12 = (&RatSeries::one(12) - &RatSeries::term(r(2), 1, Parity::Even, 12))
            .invert()
            .unwrap();
        let b = quotient_series_strongly_free(&a12, &omega).unwrap();
        let lhs = (&RatSeries::one(12) - &(&omega * &b)).invert().unwrap();
        assert_eq!(lhs, a_omega_series(&a12, (2, Parity::Even)).unwrap());
    }

    #[test]
    fn freeset_slices() {
        let n = 8;
        // monomial case: hc1 = 0
        let v = RatSeries::term(r(2), 1, Parity::Even, n);
        let omega = RatSeries::term(Rat::one(), 2, Parity::Even, n);
        let t = freeset_hc(&v, &omega, &RatSeries::zero(n)).unwrap();
        let expect = TriSeries::from_signed(&hcfree(&(&v - &omega)).unwrap());
        assert_eq!(t, expect);
        // omega = 0, hc1 = 0: free algebra
        let free = freeset_hc(&v, &RatSeries::zero(n), &RatSeries::zero(n)).unwrap();
        assert_eq!(free, TriSeries::from_signed(&hcfree(&v).unwrap()));
    }

    #[test]
    fn symmetric_preset_slices() {
        let n = 8;
        let t = generic_symmetric::<Rat>(3, n).unwrap();
        // degree-one slice is yz^2
        assert_eq!(t.get(1, 2, Parity::Odd), Rat::one());
        // degree-zero slice is z^2 + hcfree(3zy - z^2); check weight 2
        // (one even commutator class + hcfree contribution 2)
        assert_eq!(t.get(0, 2, Parity::Even), r(3));
        // consistency: the 0-slice minus y*(1-slice) is hcfree(nzy - z^2)
        let mut v = RatSeries::term(r(3), 1, Parity::Odd, n);
        v.add_to(2, Parity::Even, -Rat::one());
        let h = hcfree(&v).unwrap();
        for (q, eps, c) in h.iter_nonzero() {
            let lhs = t.get(0, q, eps)
                - t.get(1, q, eps.flip()); // y shift moves the slice parity
            assert_eq!(lhs, c.clone(), "slot ({q}, {eps:?})");
        }
    }

    #[test]
    fn polynomial_generic_paper_scale_example() {
        // seven even variables, 25 = C(8,2) - 3 generic quadrics:
        // 7z + 3z^2 + 21xyz^2 + 98x^2z^3 + 465yx^3z^4 + 2401x^4z^5
        let t = polynomial_generic::<Rat>(7, 3, 1, 3, 5).unwrap();
        let mut expect = RatTriSeries::zero(5);
        expect.add_to(0, 1, Parity::Even, r(7));
        expect.add_to(0, 2, Parity::Even, r(3));
        expect.add_to(1, 2, Parity::Odd, r(21));
        expect.add_to(2, 3, Parity::Even, r(98));
        expect.add_to(3, 4, Parity::Odd, r(465));
        expect.add_to(4, 5, Parity::Even, r(2401));
        assert_eq!(t, expect);
    }

    #[test]
    fn preset_constraints_are_enforced() {
        assert!(matches!(
            generic_quadratic::<Rat>(1, 5),
            Err(CalculusError::ConstraintViolation(_))
        ));
        assert!(matches!(
            generic_symmetric::<Rat>(2, 5),
            Err(CalculusError::ConstraintViolation(_))
        ));
        // r > jk
        assert!(matches!(
            generic_symmetric_many::<Rat>(9, 5, 2, 2, 5),
            Err(CalculusError::ConstraintViolation(_))
        ));
        // j + k + jk > n
        assert!(matches!(
            polynomial_generic::<Rat>(6, 3, 1, 3, 5),
            Err(CalculusError::ConstraintViolation(_))
        ));
        assert!(matches!(
            exceptional::<Rat>(ExceptionalCase::B0, 1, 5),
            Err(CalculusError::ConstraintViolation(_))
        ));
    }

    #[test]
    fn exceptional_b0_matches_two_variable_closed_form() {
        // at n = 2 the quotient is the commutative plane:
        // (2z - z^2 + xyz^2)/(1-z)^2
        let n = 6;
        let t = exceptional::<Rat>(ExceptionalCase::B0, 2, n).unwrap();
        for q in 1..=n {
            // even degree-zero: coefficient of z^q in (2z-z^2)/(1-z)^2 = q+...
            // (2z - z^2)/(1-z)^2 = sum (q+1) z^q - ... compute directly:
            // 2z/(1-z)^2 = sum 2q z^q; z^2/(1-z)^2 = sum (q-1) z^q
            let expect0 = r(2 * q as i64) - r(q as i64 - 1);
            assert_eq!(t.get(0, q, Parity::Even), expect0, "q = {q}");
            if q >= 2 {
                assert_eq!(t.get(1, q, Parity::Odd), r(q as i64 - 1), "q = {q}");
            }
        }
    }

    #[test]
    fn exceptional_b1_degree_zero_counts_traces() {
        // weight-1 coefficient must equal the number of generators (odd),
        // and the weight-2 even coefficient is 1 (commutator class) + the
        // trace count from hcfree(nyz - z^2)
        for n_gens in 2..=4u32 {
            let t = exceptional::<Rat>(ExceptionalCase::B1, n_gens, 6).unwrap();
            assert_eq!(t.get(0, 1, Parity::Odd), r(n_gens as i64));
            assert_eq!(t.get(0, 1, Parity::Even), Rat::zero());
        }
        // at n = 2 compare against the Koszul-dual route:
        // HC(B1!) = (1+xy)z^2/(1-x^2z^2)^2 + 2z/(1-x^2z^2), remapped
        let n = 9;
        let mut dual = RatTriSeries::zero(n);
        let mut m = 0;
        while 2 * m + 2 <= n {
            dual.add_to(2 * m, 2 * m + 2, Parity::Even, r(m as i64 + 1));
            dual.add_to(2 * m + 1, 2 * m + 2, Parity::Odd, r(m as i64 + 1));
            m += 1;
        }
        let mut j = 0;
        while 2 * j + 1 <= n {
            dual.add_to(2 * j, 2 * j + 1, Parity::Even, r(2));
            j += 1;
        }
        let remapped = koszul_dual(&dual, DualityRemap::HcDual).unwrap();
        assert_eq!(remapped, exceptional::<Rat>(ExceptionalCase::B1, 2, n).unwrap());
    }

    #[test]
    fn exceptional_a_cases_low_weights() {
        // A0 at n = 1: pure z/(1-x^2 z^2)
        let t = exceptional::<Rat>(ExceptionalCase::A0, 1, 7).unwrap();
        let mut expect = RatTriSeries::zero(7);
        for j in 0..=3 {
            expect.add_to(2 * j, 2 * j + 1, Parity::Even, Rat::one());
        }
        assert_eq!(t, expect);
        // A1 at n = 1: pure yz/(1 - xz)
        let t = exceptional::<Rat>(ExceptionalCase::A1, 1, 7).unwrap();
        let mut expect = RatTriSeries::zero(7);
        for j in 0..7 {
            expect.add_to(j, j + 1, Parity::Odd, Rat::one());
        }
        assert_eq!(t, expect);
    }
}
