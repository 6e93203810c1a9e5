//! Exponentials and logarithms between the additive group `P` of
//! constant-term-zero series and the multiplicative group `U` of
//! constant-term-one series, plus the Euler-phi logarithm `hcfree` that
//! computes the degree-zero cyclic homology series of a tensor algebra.
//!
//! Every transform is computed over the exact scalar field. Where a theorem
//! guarantees integrality of the output (`hcfree` on series with
//! nonnegative integer coefficients) the result is checked and a violation
//! is reported as an error instead of being rounded away.

use num_traits::Zero;
use thiserror::Error;

use crate::scalar::{binomial, sign_pow, Parity, Scalar};
use crate::series::{SeriesError, SignedSeries, TriSeries};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransformError {
    #[error("series must have zero constant term")]
    ConstantTermNotZero,
    #[error("series must have constant term 1")]
    ConstantTermNotOne,
    #[error("coefficient at weight {q} is not an integer; use the rational variant")]
    NonIntegerCoefficient { q: u32 },
    #[error("weights sequence must have c_1 != 0")]
    ZeroLeadingWeight,
    #[error(
        "integrality violated at weight {q}, parity {eps}: got {value} \
         (input had nonnegative integer coefficients)"
    )]
    IntegralityViolation { q: u32, eps: Parity, value: String },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Moebius function by sieve; `mu[k]` valid for `1 <= k <= n`.
pub fn mobius_sieve(n: u32) -> Vec<i64> {
    let n = n as usize;
    let mut mu = vec![1i64; n + 1];
    let mut is_prime = vec![true; n + 1];
    let mut primes = Vec::new();
    if n >= 1 {
        mu[0] = 0;
    }
    for i in 2..=n {
        if is_prime[i] {
            primes.push(i);
            mu[i] = -1;
        }
        for &p in &primes {
            let ip = i * p;
            if ip > n {
                break;
            }
            is_prime[ip] = false;
            if i % p == 0 {
                mu[ip] = 0;
                break;
            }
            mu[ip] = -mu[i];
        }
    }
    mu
}

/// Euler totient by sieve; `phi[k]` valid for `1 <= k <= n`.
pub fn euler_phi_sieve(n: u32) -> Vec<u64> {
    let n = n as usize;
    let mut phi: Vec<u64> = (0..=n as u64).collect();
    for i in 2..=n {
        if phi[i] == i as u64 {
            // i is prime
            let mut j = i;
            while j <= n {
                phi[j] -= phi[j] / i as u64;
                j += i;
            }
        }
    }
    phi
}

/// Coefficient sequence `c = {c_k}, k >= 1` with `c_1 != 0`, defining the
/// logarithm `X -> sum_k c_k log X(z^k, (-1)^{k+1} y^k)`.
#[derive(Clone, Debug)]
pub struct LogCWeights<T> {
    c: Vec<T>,
}

impl<T: Scalar> LogCWeights<T> {
    pub fn new(c: Vec<T>) -> Result<Self, TransformError> {
        if c.first().map_or(true, Zero::is_zero) {
            return Err(TransformError::ZeroLeadingWeight);
        }
        Ok(LogCWeights { c })
    }

    /// `c_k = mu(k)/k`, the weights of the `Lie` transform.
    pub fn mobius(n: u32) -> Self {
        let mu = mobius_sieve(n.max(1));
        LogCWeights {
            c: (1..=n.max(1))
                .map(|k| {
                    let m = mu[k as usize];
                    T::from_i64(m).unwrap() / T::from_u32(k).unwrap()
                })
                .collect(),
        }
    }

    /// `c_k = phi(k)/k`, the weights behind `hcfree`.
    pub fn euler_phi(n: u32) -> Self {
        let phi = euler_phi_sieve(n.max(1));
        LogCWeights {
            c: (1..=n.max(1))
                .map(|k| T::from_u64(phi[k as usize]).unwrap() / T::from_u32(k).unwrap())
                .collect(),
        }
    }

    pub fn weight(&self, k: u32) -> T {
        self.c
            .get((k - 1) as usize)
            .cloned()
            .unwrap_or_else(T::zero)
    }
}

/// `exp(X) = sum X^k / k!` for `X` with zero constant term.
pub fn exp_series<T: Scalar>(x: &SignedSeries<T>) -> Result<SignedSeries<T>, TransformError> {
    if !x.has_zero_constant() {
        return Err(TransformError::ConstantTermNotZero);
    }
    let n = x.trunc();
    let mut acc = SignedSeries::one(n);
    let mut pow = SignedSeries::one(n);
    let mut fact = T::one();
    for k in 1..=n.max(1) {
        pow = &pow * x;
        if pow.is_zero() {
            break;
        }
        fact = fact * T::from_u32(k).unwrap();
        acc = &acc + &pow.scale(&(T::one() / fact.clone()));
    }
    Ok(acc)
}

/// `log(X) = -sum (1-X)^k / k` for `X` with constant term 1.
pub fn log_series<T: Scalar>(x: &SignedSeries<T>) -> Result<SignedSeries<T>, TransformError> {
    if !x.has_constant_one() {
        return Err(TransformError::ConstantTermNotOne);
    }
    let n = x.trunc();
    let u = &SignedSeries::one(n) - x;
    let mut acc = SignedSeries::zero(n);
    let mut pow = SignedSeries::one(n);
    for k in 1..=n.max(1) {
        pow = &pow * &u;
        if pow.is_zero() {
            break;
        }
        acc = &acc - &pow.scale(&(T::one() / T::from_u32(k).unwrap()));
    }
    Ok(acc)
}

fn extract_integer<T: Scalar>(v: &T, q: u32) -> Result<i64, TransformError> {
    if !v.is_integer() {
        return Err(TransformError::NonIntegerCoefficient { q });
    }
    Ok(v.to_i64().expect("exponent too large"))
}

/// `(1 + y z^k)^b`, integer `b` of either sign.
fn odd_factor<T: Scalar>(k: u32, b: i64, n: u32) -> SignedSeries<T> {
    let base = &SignedSeries::one(n) + &SignedSeries::term(T::one(), k, Parity::Odd, n);
    let p = base.pow(b.unsigned_abs() as u32);
    if b >= 0 {
        p
    } else {
        p.invert().expect("constant term is 1")
    }
}

/// `(1 - z^k)^{-a}`, integer `a` of either sign.
fn even_factor<T: Scalar>(k: u32, a: i64, n: u32) -> SignedSeries<T> {
    let base = &SignedSeries::one(n) - &SignedSeries::term(T::one(), k, Parity::Even, n);
    let p = base.pow(a.unsigned_abs() as u32);
    if a >= 0 {
        p.invert().expect("constant term is 1")
    } else {
        p
    }
}

/// The symmetric-algebra exponential
/// `S(X) = prod_k (1 + y z^k)^{b_k} / (1 - z^k)^{a_k}` for
/// `X = sum a_k z^k + y sum b_k z^k` with integer coefficients.
pub fn sym_exp<T: Scalar>(x: &SignedSeries<T>) -> Result<SignedSeries<T>, TransformError> {
    if !x.has_zero_constant() {
        return Err(TransformError::ConstantTermNotZero);
    }
    let n = x.trunc();
    let mut acc = SignedSeries::one(n);
    for k in 1..=n {
        let a = extract_integer(&x.get(k, Parity::Even), k)?;
        let b = extract_integer(&x.get(k, Parity::Odd), k)?;
        if b != 0 {
            acc = &acc * &odd_factor(k, b, n);
        }
        if a != 0 {
            acc = &acc * &even_factor(k, a, n);
        }
    }
    Ok(acc)
}

/// `S` extended to rational coefficients through binomial series
/// `(1+z)^alpha`. Kept separate from `sym_exp`: the integral operator is
/// the one with the symmetric-algebra meaning.
pub fn sym_exp_rational<T: Scalar>(
    x: &SignedSeries<T>,
) -> Result<SignedSeries<T>, TransformError> {
    if !x.has_zero_constant() {
        return Err(TransformError::ConstantTermNotZero);
    }
    let n = x.trunc();
    let mut acc = SignedSeries::one(n);
    for k in 1..=n {
        let a = x.get(k, Parity::Even);
        let b = x.get(k, Parity::Odd);
        if !b.is_zero() {
            // (1 + y z^k)^b = sum_j C(b, j) y^j z^{kj}
            let mut f = SignedSeries::zero(n);
            let mut j = 0;
            while k * j <= n {
                f.set(k * j, Parity::from_u32(j), binomial(&b, j));
                j += 1;
            }
            acc = &acc * &f;
        }
        if !a.is_zero() {
            // (1 - z^k)^{-a} = sum_j C(-a, j) (-1)^j z^{kj}
            let neg_a = -a;
            let mut f = SignedSeries::zero(n);
            let mut j = 0;
            while k * j <= n {
                let c = binomial(&neg_a, j) * sign_pow::<T>(j);
                f.set(k * j, Parity::Even, c);
                j += 1;
            }
            acc = &acc * &f;
        }
    }
    Ok(acc)
}

/// `Log_c(X) = sum_k c_k log X(z^k, (-1)^{k+1} y^k)`. Higher `k` than the
/// truncation bound cannot contribute because `ord(1 - X) >= 1`.
pub fn log_c<T: Scalar>(
    x: &SignedSeries<T>,
    c: &LogCWeights<T>,
) -> Result<SignedSeries<T>, TransformError> {
    if !x.has_constant_one() {
        return Err(TransformError::ConstantTermNotOne);
    }
    let n = x.trunc();
    let mut acc = SignedSeries::zero(n);
    for k in 1..=n.max(1) {
        let ck = c.weight(k);
        if ck.is_zero() {
            continue;
        }
        let sub = x.substitute_power(k);
        acc = &acc + &log_series(&sub)?.scale(&ck);
    }
    Ok(acc)
}

/// The inverse of `sym_exp`: Moebius-weighted logarithm. For the series of
/// an enveloping algebra the output is the series of the Lie algebra.
pub fn lie_log<T: Scalar>(x: &SignedSeries<T>) -> Result<SignedSeries<T>, TransformError> {
    log_c(x, &LogCWeights::mobius(x.trunc()))
}

/// `hcfree(V) = -sum_k phi(k)/k log(1 - V(z^k, (-1)^{k+1} y^k))`:
/// the series of the weight-graded trace space `T(V)+/[T(V),T(V)]` when `V`
/// has nonnegative integer coefficients.
pub fn hcfree<T: Scalar>(v: &SignedSeries<T>) -> Result<SignedSeries<T>, TransformError> {
    if !v.has_zero_constant() {
        return Err(TransformError::ConstantTermNotZero);
    }
    let n = v.trunc();
    let one = SignedSeries::one(n);
    let result = {
        let weights = LogCWeights::<T>::euler_phi(n);
        let mut acc = SignedSeries::zero(n);
        for k in 1..=n.max(1) {
            let ck = weights.weight(k);
            if ck.is_zero() {
                continue;
            }
            let sub = v.substitute_power(k);
            if sub.is_zero() {
                continue;
            }
            acc = &acc - &log_series(&(&one - &sub))?.scale(&ck);
        }
        acc
    };
    // theorem-backed integrality: natural input coefficients force natural
    // output coefficients; report a violation, never round
    let natural_input = v
        .iter_nonzero()
        .all(|(_, _, c)| c.is_integer() && !c.is_negative());
    if natural_input {
        for (q, eps, c) in result.iter_nonzero() {
            if !c.is_integer() || c.is_negative() {
                return Err(TransformError::IntegralityViolation {
                    q,
                    eps,
                    value: c.to_string(),
                });
            }
        }
    }
    Ok(result)
}

/// Degree-zero cyclic homology composition rule for a free product `A * B`:
/// slices at homological degree `n > 0` add, and the degree-zero slice gains
/// `hcfree((A-1)(B-1))`.
pub fn free_product_hc<T: Scalar>(
    hc_a: &TriSeries<T>,
    hc_b: &TriSeries<T>,
    a: &SignedSeries<T>,
    b: &SignedSeries<T>,
) -> Result<TriSeries<T>, TransformError> {
    if !a.has_constant_one() || !b.has_constant_one() {
        return Err(TransformError::ConstantTermNotOne);
    }
    let one = SignedSeries::one(a.trunc().min(b.trunc()));
    let cross = &(a - &one) * &(b - &one);
    let extra = hcfree(&cross)?;
    let sum = hc_a + hc_b;
    Ok(&sum + &TriSeries::from_signed(&extra.truncate(sum.trunc())))
}
