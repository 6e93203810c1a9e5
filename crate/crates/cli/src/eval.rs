//! Evaluation of parsed expressions against the series library.
//!
//! Two-variable expressions evaluate to `SignedSeries`; anything mentioning
//! `x` or a three-variable function is promoted to `TriSeries`. Mixed
//! arithmetic promotes the two-variable side. Precondition failures carry
//! the source span of the offending subexpression.

use std::fmt;

use cychom::calculus::{
    self, exterior_hh, hc_from_hh, hh_from_hc, hkr, koszul_dual, DualityRemap, ExceptionalCase,
};
use cychom::scalar::Parity;
use cychom::series::TriSeries;
use cychom::transforms::{exp_series, hcfree, lie_log, log_series, sym_exp};
use cychom::{Rat, RatSeries, RatTriSeries};
use num_traits::{One, ToPrimitive, Zero};

use crate::expr::{BinOp, Expr, Span, Spanned, Var};

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Signed(RatSeries),
    Tri(RatTriSeries),
}

impl Value {
    fn into_tri(self) -> RatTriSeries {
        match self {
            Value::Signed(s) => TriSeries::from_signed(&s),
            Value::Tri(t) => t,
        }
    }

    pub fn render_table(&self) -> String {
        match self {
            Value::Signed(s) => s.to_string(),
            Value::Tri(t) => t.to_string(),
        }
    }

    pub fn render_json(&self) -> serde_json::Value {
        match self {
            Value::Signed(s) => s.to_json(),
            Value::Tri(t) => t.to_json(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalError {
    pub span: Span,
    pub message: String,
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "evaluation error at {}..{}: {}",
            self.span.start, self.span.end, self.message
        )
    }
}

impl std::error::Error for EvalError {}

fn fail<T>(span: Span, message: impl Into<String>) -> Result<T, EvalError> {
    Err(EvalError {
        span,
        message: message.into(),
    })
}

fn expect_signed(v: Value, span: Span, what: &str) -> Result<RatSeries, EvalError> {
    match v {
        Value::Signed(s) => Ok(s),
        Value::Tri(_) => fail(span, format!("{what} needs a two-variable series (no x)")),
    }
}

fn integer_literal(e: &Spanned) -> Option<i64> {
    match &e.node {
        Expr::Lit(v) if v.is_integer() => v.to_i64(),
        Expr::Neg(inner) => integer_literal(inner).map(|v| -v),
        _ => None,
    }
}

fn expect_integer(e: &Spanned, what: &str) -> Result<i64, EvalError> {
    integer_literal(e)
        .ok_or_else(|| EvalError {
            span: e.span,
            message: format!("{what} must be an integer literal"),
        })
}

fn expect_u32(e: &Spanned, what: &str) -> Result<u32, EvalError> {
    let v = expect_integer(e, what)?;
    u32::try_from(v).map_err(|_| EvalError {
        span: e.span,
        message: format!("{what} must be nonnegative"),
    })
}

fn arity(args: &[Spanned], n: usize, name: &str, span: Span) -> Result<(), EvalError> {
    if args.len() != n {
        return fail(
            span,
            format!("`{name}` takes {n} argument(s), got {}", args.len()),
        );
    }
    Ok(())
}

pub fn eval(e: &Spanned, trunc: u32) -> Result<Value, EvalError> {
    match &e.node {
        Expr::Lit(v) => Ok(Value::Signed(RatSeries::constant(v.clone(), trunc))),
        Expr::Var(Var::Z) => Ok(Value::Signed(RatSeries::term(
            Rat::one(),
            1,
            Parity::Even,
            trunc,
        ))),
        Expr::Var(Var::Y) => Ok(Value::Signed(RatSeries::term(
            Rat::one(),
            0,
            Parity::Odd,
            trunc,
        ))),
        Expr::Var(Var::X) => Ok(Value::Tri(RatTriSeries::term(
            Rat::one(),
            1,
            1,
            Parity::Even,
            trunc,
        ))),
        Expr::Neg(inner) => Ok(match eval(inner, trunc)? {
            Value::Signed(s) => Value::Signed(-&s),
            Value::Tri(t) => Value::Tri(-&t),
        }),
        Expr::Bin(op, l, r) => {
            let lv = eval(l, trunc)?;
            let rv = eval(r, trunc)?;
            match (lv, rv) {
                (Value::Signed(a), Value::Signed(b)) => {
                    Ok(Value::Signed(apply_signed(*op, &a, &b, r.span)?))
                }
                (a, b) => {
                    let a = a.into_tri();
                    let b = b.into_tri();
                    Ok(Value::Tri(apply_tri(*op, &a, &b, r.span)?))
                }
            }
        }
        Expr::Pow(base, exp) => {
            let b = eval(base, trunc)?;
            let e_abs = exp.unsigned_abs() as u32;
            match b {
                Value::Signed(s) => {
                    let p = s.pow(e_abs);
                    if *exp >= 0 {
                        Ok(Value::Signed(p))
                    } else {
                        match p.invert_unit() {
                            Ok(inv) => Ok(Value::Signed(inv)),
                            Err(_) => fail(base.span, "negative power of a non-unit series"),
                        }
                    }
                }
                Value::Tri(t) => {
                    let p = t.pow(e_abs);
                    if *exp >= 0 {
                        Ok(Value::Tri(p))
                    } else {
                        match p.invert_unit() {
                            Ok(inv) => Ok(Value::Tri(inv)),
                            Err(_) => fail(base.span, "negative power of a non-unit series"),
                        }
                    }
                }
            }
        }
        Expr::Call(name, args) => call(name, args, e.span, trunc),
    }
}

fn apply_signed(op: BinOp, a: &RatSeries, b: &RatSeries, rspan: Span) -> Result<RatSeries, EvalError> {
    match op {
        BinOp::Add => Ok(a + b),
        BinOp::Sub => Ok(a - b),
        BinOp::Mul => Ok(a * b),
        BinOp::Div => match b.invert_unit() {
            Ok(inv) => Ok(a * &inv),
            Err(_) => fail(rspan, "division by a non-unit series"),
        },
    }
}

fn apply_tri(
    op: BinOp,
    a: &RatTriSeries,
    b: &RatTriSeries,
    rspan: Span,
) -> Result<RatTriSeries, EvalError> {
    match op {
        BinOp::Add => Ok(a + b),
        BinOp::Sub => Ok(a - b),
        BinOp::Mul => Ok(a * b),
        BinOp::Div => match b.invert_unit() {
            Ok(inv) => Ok(a * &inv),
            Err(_) => fail(rspan, "division by a non-unit series"),
        },
    }
}

fn signed_arg(
    args: &[Spanned],
    idx: usize,
    trunc: u32,
    what: &str,
) -> Result<RatSeries, EvalError> {
    let v = eval(&args[idx], trunc)?;
    expect_signed(v, args[idx].span, what)
}

fn tri_arg(args: &[Spanned], idx: usize, trunc: u32) -> Result<RatTriSeries, EvalError> {
    Ok(eval(&args[idx], trunc)?.into_tri())
}

fn call(name: &str, args: &[Spanned], span: Span, trunc: u32) -> Result<Value, EvalError> {
    let lift = |r: Result<RatSeries, cychom::transforms::TransformError>| -> Result<Value, EvalError> {
        match r {
            Ok(s) => Ok(Value::Signed(s)),
            Err(e) => fail(span, e.to_string()),
        }
    };
    match name {
        "hcfree" => {
            arity(args, 1, name, span)?;
            lift(hcfree(&signed_arg(args, 0, trunc, "hcfree")?))
        }
        "lie" => {
            arity(args, 1, name, span)?;
            lift(lie_log(&signed_arg(args, 0, trunc, "lie")?))
        }
        "S" => {
            arity(args, 1, name, span)?;
            lift(sym_exp(&signed_arg(args, 0, trunc, "S")?))
        }
        "log" => {
            arity(args, 1, name, span)?;
            lift(log_series(&signed_arg(args, 0, trunc, "log")?))
        }
        "exp" => {
            arity(args, 1, name, span)?;
            lift(exp_series(&signed_arg(args, 0, trunc, "exp")?))
        }
        "inv" => {
            arity(args, 1, name, span)?;
            let s = signed_arg(args, 0, trunc, "inv")?;
            match s.invert() {
                Ok(i) => Ok(Value::Signed(i)),
                Err(e) => fail(span, e.to_string()),
            }
        }
        "subst" => {
            arity(args, 2, name, span)?;
            let s = signed_arg(args, 0, trunc, "subst")?;
            let k = expect_u32(&args[1], "the substitution exponent")?;
            if k == 0 {
                return fail(args[1].span, "the substitution exponent must be >= 1");
            }
            Ok(Value::Signed(s.substitute_power(k)))
        }
        "hkr" => {
            arity(args, 1, name, span)?;
            let n = expect_u32(&args[0], "the number of variables")?;
            Ok(Value::Tri(hkr::<Rat>(n, trunc)))
        }
        "exterior" => {
            arity(args, 1, name, span)?;
            let n = expect_u32(&args[0], "the number of variables")?;
            Ok(Value::Tri(exterior_hh::<Rat>(n, trunc)))
        }
        "hh_from_hc" => {
            arity(args, 1, name, span)?;
            let t = tri_arg(args, 0, trunc)?;
            match hh_from_hc(&t) {
                Ok(v) => Ok(Value::Tri(v)),
                Err(e) => fail(span, e.to_string()),
            }
        }
        "hc_from_hh" => {
            arity(args, 1, name, span)?;
            let t = tri_arg(args, 0, trunc)?;
            match hc_from_hh(&t) {
                Ok(v) => Ok(Value::Tri(v)),
                Err(e) => fail(span, e.to_string()),
            }
        }
        "koszul_hh" => {
            arity(args, 1, name, span)?;
            let t = tri_arg(args, 0, trunc)?;
            match koszul_dual(&t, DualityRemap::HhDual) {
                Ok(v) => Ok(Value::Tri(v)),
                Err(e) => fail(span, e.to_string()),
            }
        }
        "koszul_hc" => {
            arity(args, 1, name, span)?;
            let t = tri_arg(args, 0, trunc)?;
            match koszul_dual(&t, DualityRemap::HcDual) {
                Ok(v) => Ok(Value::Tri(v)),
                Err(e) => fail(span, e.to_string()),
            }
        }
        _ => {
            if let Some(preset) = name.strip_prefix("predict_") {
                return predict_call(preset, args, span, trunc);
            }
            fail(span, format!("unknown function `{name}`"))
        }
    }
}

/// Named predictions, also reachable through `eval` as `predict_<preset>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Preset {
    GenericQuadratic { n: u32 },
    GenericSymmetric { n: u32 },
    GenericSymmetricMany { n: u32, r: u32, j: u32, k: u32 },
    PolynomialGeneric { n: u32, r: u32, j: u32, k: u32 },
    Exceptional { case: ExceptionalCase, n: u32 },
}

impl Preset {
    /// `(name, parameter names, description)` for every preset.
    pub fn catalog() -> Vec<(&'static str, &'static str, &'static str)> {
        vec![
            (
                "generic_quadratic",
                "n",
                "one generic quadratic form in n odd weight-one variables (n >= 2)",
            ),
            (
                "generic_symmetric",
                "n",
                "one generic symmetric quadratic form in n odd variables (n >= 3)",
            ),
            (
                "generic_symmetric_many",
                "n r j k",
                "r generic symmetric forms in n odd variables, r <= j*k, j+k+j*k <= n",
            ),
            (
                "polynomial_generic",
                "n r j k",
                "polynomial ring on n even variables modulo C(n+1,2)-r generic quadrics",
            ),
            (
                "exceptional",
                "case n",
                "one-relator special cases; case is one of a0, a1, b0, b1",
            ),
        ]
    }

    pub fn from_cli(name: &str, params: &[String]) -> Result<Self, String> {
        let want = |k: usize| -> Result<Vec<u32>, String> {
            if params.len() != k {
                return Err(format!("preset `{name}` takes {k} parameter(s), got {}", params.len()));
            }
            params
                .iter()
                .map(|p| {
                    p.parse::<u32>()
                        .map_err(|_| format!("parameter `{p}` must be a nonnegative integer"))
                })
                .collect()
        };
        match name {
            "generic_quadratic" => {
                let p = want(1)?;
                Ok(Preset::GenericQuadratic { n: p[0] })
            }
            "generic_symmetric" => {
                let p = want(1)?;
                Ok(Preset::GenericSymmetric { n: p[0] })
            }
            "generic_symmetric_many" => {
                let p = want(4)?;
                Ok(Preset::GenericSymmetricMany {
                    n: p[0],
                    r: p[1],
                    j: p[2],
                    k: p[3],
                })
            }
            "polynomial_generic" => {
                let p = want(4)?;
                Ok(Preset::PolynomialGeneric {
                    n: p[0],
                    r: p[1],
                    j: p[2],
                    k: p[3],
                })
            }
            "exceptional" => {
                if params.len() != 2 {
                    return Err(format!(
                        "preset `exceptional` takes 2 parameters (case, n), got {}",
                        params.len()
                    ));
                }
                let case = ExceptionalCase::parse(&params[0])
                    .ok_or_else(|| format!("unknown case `{}`; use a0, a1, b0 or b1", params[0]))?;
                let n = params[1]
                    .parse::<u32>()
                    .map_err(|_| format!("parameter `{}` must be a nonnegative integer", params[1]))?;
                Ok(Preset::Exceptional { case, n })
            }
            _ => Err(format!("unknown preset `{name}`; see `list-presets`")),
        }
    }

    pub fn compute(&self, trunc: u32) -> Result<RatTriSeries, calculus::CalculusError> {
        match *self {
            Preset::GenericQuadratic { n } => calculus::generic_quadratic(n, trunc),
            Preset::GenericSymmetric { n } => calculus::generic_symmetric(n, trunc),
            Preset::GenericSymmetricMany { n, r, j, k } => {
                calculus::generic_symmetric_many(n, r, j, k, trunc)
            }
            Preset::PolynomialGeneric { n, r, j, k } => {
                calculus::polynomial_generic(n, r, j, k, trunc)
            }
            Preset::Exceptional { case, n } => calculus::exceptional(case, n, trunc),
        }
    }
}

fn predict_call(
    preset: &str,
    args: &[Spanned],
    span: Span,
    trunc: u32,
) -> Result<Value, EvalError> {
    let mut params = Vec::new();
    let name = match preset {
        "exceptional_a0" | "exceptional_a1" | "exceptional_b0" | "exceptional_b1" => {
            params.push(preset["exceptional_".len()..].to_string());
            "exceptional"
        }
        other => other,
    };
    for a in args {
        params.push(expect_u32(a, "a preset parameter")?.to_string());
    }
    let p = Preset::from_cli(name, &params).map_err(|m| EvalError { span, message: m })?;
    match p.compute(trunc) {
        Ok(t) => Ok(Value::Tri(t)),
        Err(e) => fail(span, e.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use num_traits::FromPrimitive;

    fn ev(src: &str, trunc: u32) -> Value {
        eval(&parse(src).unwrap(), trunc).unwrap()
    }

    fn r(n: i64) -> Rat {
        Rat::from_i64(n).unwrap()
    }

    #[test]
    fn evaluates_hcfree_of_line() {
        let v = ev("hcfree(z)", 8);
        match v {
            Value::Signed(s) => {
                for q in 1..=8 {
                    assert_eq!(s.get(q, Parity::Even), Rat::one());
                }
            }
            _ => panic!("expected a two-variable series"),
        }
    }

    #[test]
    fn evaluates_showcase_example() {
        let v = ev("hcfree(7*y*z-3*z^2)", 5);
        let Value::Signed(s) = v else { panic!() };
        assert_eq!(s.get(2, Parity::Even), r(18));
        assert_eq!(s.get(4, Parity::Even), r(465));
        assert_eq!(s.get(1, Parity::Odd), r(7));
        assert_eq!(s.get(3, Parity::Odd), r(98));
        assert_eq!(s.get(5, Parity::Odd), r(2401));
    }

    #[test]
    fn constant_expressions_stay_constant() {
        let Value::Signed(s) = ev("1+0*z", 4) else { panic!() };
        assert_eq!(s, RatSeries::one(4));
        // rational literals through division
        let Value::Signed(s) = ev("3/2", 4) else { panic!() };
        assert_eq!(s, RatSeries::constant(Rat::from_ratio(3, 2), 4));
    }

    #[test]
    fn promotes_to_three_variables() {
        let Value::Tri(t) = ev("(1+y*x*z)^2/(1-z)^2", 3) else { panic!() };
        assert_eq!(t, hkr::<Rat>(2, 3));
        // hkr itself
        let Value::Tri(t) = ev("hkr(2)", 3) else { panic!() };
        assert_eq!(t, hkr::<Rat>(2, 3));
    }

    #[test]
    fn preset_functions_evaluate() {
        let Value::Tri(t) = ev("predict_polynomial_generic(7, 3, 1, 3)", 5) else {
            panic!()
        };
        assert_eq!(t.get(1, 2, Parity::Odd), r(21));
        let Value::Tri(t) = ev("predict_exceptional_b0(2)", 5) else { panic!() };
        assert_eq!(
            hh_from_hc(&t).unwrap(),
            hkr::<Rat>(2, 5),
            "shift relation reproduces the commutative-plane series"
        );
    }

    #[test]
    fn division_by_non_unit_is_reported_with_span() {
        let e = parse("1/(z+z^2)").unwrap();
        let err = eval(&e, 6).unwrap_err();
        assert_eq!(err.span.start, 2);
        assert!(err.message.contains("non-unit"));
        // inv has the stricter constant-term-one contract
        let e = parse("inv(2-2*z)").unwrap();
        assert!(eval(&e, 6).is_err());
    }

    #[test]
    fn signed_only_functions_reject_x() {
        let e = parse("hcfree(x*z)").unwrap();
        let err = eval(&e, 6).unwrap_err();
        assert!(err.message.contains("two-variable"));
    }

    #[test]
    fn truncation_monotonicity() {
        let wide = ev("hcfree(2*z) + lie(1/(1-2*z))", 12);
        let narrow = ev("hcfree(2*z) + lie(1/(1-2*z))", 8);
        let (Value::Signed(w), Value::Signed(n)) = (wide, narrow) else {
            panic!()
        };
        assert_eq!(w.truncate(8), n);
    }

    #[test]
    fn subst_checks_exponent() {
        assert!(eval(&parse("subst(z, 0)").unwrap(), 5).is_err());
        assert!(eval(&parse("subst(z, z)").unwrap(), 5).is_err());
        let Value::Signed(s) = ev("subst(1+y*z, 2) - (1 - z^2)", 6) else {
            panic!()
        };
        assert!(s.is_zero());
    }
}
