//! Exact weight coefficients, affine in the prime `p` and one optional
//! auxiliary symbol, with sound three-valued comparison under lower bounds.
//!
//! A [`Coeff`] is `a·p + b·aux + c` with integer a, b, c; a plain integer has
//! a = b = 0. The interpretation of the symbols lives in a [`Context`]:
//! whether `p` is a fixed prime or symbolic with a lower bound, and the name
//! and lower bound of the auxiliary symbol if one is declared. Comparisons
//! ([`Context::lt`], [`Context::le`], [`Context::eq`], ...) return a
//! [`Tri`]: `Always`/`Never` are guarantees over every instantiation
//! respecting the bounds, `Indeterminate` otherwise.
//!
//! The one comparison the weight calculus needs beyond affine forms is
//! `p·a` against `b` (the minimal-cone slope test) with `p` itself symbolic,
//! which introduces p² and p·aux monomials. [`Context::lt_scaled`] handles it
//! by shifting to the corner `p = pmin + x`, `aux = auxmin + y` (x, y ≥ 0)
//! and applying a sign rule to the shifted coefficients. The rule is sound
//! for any sign of the declared bounds; it is deliberately not complete.

use crate::embeddings::EmbeddingSet;
use crate::error::{Error, Result};
use crate::tri::Tri;

/// An exact coefficient `p_coef·p + aux_coef·aux + constant`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Coeff {
    pub p_coef: i64,
    pub aux_coef: i64,
    pub constant: i64,
}

impl Coeff {
    pub const ZERO: Coeff = Coeff {
        p_coef: 0,
        aux_coef: 0,
        constant: 0,
    };

    pub fn int(c: i64) -> Coeff {
        Coeff {
            p_coef: 0,
            aux_coef: 0,
            constant: c,
        }
    }

    /// The symbol `p` itself.
    pub fn p() -> Coeff {
        Coeff {
            p_coef: 1,
            aux_coef: 0,
            constant: 0,
        }
    }

    /// The auxiliary symbol.
    pub fn aux() -> Coeff {
        Coeff {
            p_coef: 0,
            aux_coef: 1,
            constant: 0,
        }
    }

    pub fn new(p_coef: i64, aux_coef: i64, constant: i64) -> Coeff {
        Coeff {
            p_coef,
            aux_coef,
            constant,
        }
    }

    pub fn is_concrete(&self) -> bool {
        self.p_coef == 0 && self.aux_coef == 0
    }

    pub fn as_int(&self) -> Option<i64> {
        self.is_concrete().then_some(self.constant)
    }

    pub fn scale(self, n: i64) -> Coeff {
        Coeff {
            p_coef: self.p_coef * n,
            aux_coef: self.aux_coef * n,
            constant: self.constant * n,
        }
    }
}

impl std::ops::Add for Coeff {
    type Output = Coeff;
    fn add(self, rhs: Coeff) -> Coeff {
        Coeff {
            p_coef: self.p_coef + rhs.p_coef,
            aux_coef: self.aux_coef + rhs.aux_coef,
            constant: self.constant + rhs.constant,
        }
    }
}

impl std::ops::Sub for Coeff {
    type Output = Coeff;
    fn sub(self, rhs: Coeff) -> Coeff {
        Coeff {
            p_coef: self.p_coef - rhs.p_coef,
            aux_coef: self.aux_coef - rhs.aux_coef,
            constant: self.constant - rhs.constant,
        }
    }
}

impl std::ops::Neg for Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        self.scale(-1)
    }
}

/// The prime: a fixed value or symbolic with a lower bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrimeSpec {
    Fixed(i64),
    Symbolic { min: i64 },
}

impl PrimeSpec {
    /// Canonical string form: `"5"` or `"sym:pmin=2"`.
    pub fn render(&self) -> String {
        match self {
            PrimeSpec::Fixed(p) => p.to_string(),
            PrimeSpec::Symbolic { min } => format!("sym:pmin={min}"),
        }
    }

    /// Parses the canonical string form.
    pub fn parse(s: &str) -> Result<PrimeSpec> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("sym:pmin=") {
            let min: i64 = rest
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad symbolic prime spec `{s}`")))?;
            Ok(PrimeSpec::Symbolic { min })
        } else {
            let p: i64 = s
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad prime spec `{s}`")))?;
            Ok(PrimeSpec::Fixed(p))
        }
    }
}

/// A declared auxiliary symbol with its integer lower bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuxSymbol {
    pub name: String,
    pub min: i64,
}

/// Values substituted for the symbols when instantiating.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Assignment {
    pub p: Option<i64>,
    pub aux: Option<i64>,
}

impl Assignment {
    pub fn p(p: i64) -> Assignment {
        Assignment {
            p: Some(p),
            aux: None,
        }
    }

    pub fn p_aux(p: i64, aux: i64) -> Assignment {
        Assignment {
            p: Some(p),
            aux: Some(aux),
        }
    }
}

/// Shared interpretation context: the embedding orbits, the prime, and the
/// optional auxiliary symbol. Every weight operation takes one of these;
/// lower bounds are declared once here and shared by all coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Context {
    pub embeddings: EmbeddingSet,
    pub prime: PrimeSpec,
    pub aux: Option<AuxSymbol>,
}

impl Context {
    pub fn new(embeddings: EmbeddingSet, prime: PrimeSpec, aux: Option<AuxSymbol>) -> Result<Context> {
        match prime {
            PrimeSpec::Fixed(p) if p < 2 => {
                return Err(Error::InvalidInput(format!(
                    "prime must be at least 2, got {p}"
                )))
            }
            PrimeSpec::Symbolic { min } if min < 2 => {
                return Err(Error::InvalidInput(format!(
                    "symbolic prime lower bound must be at least 2, got {min}"
                )))
            }
            _ => {}
        }
        if let Some(a) = &aux {
            if a.name.is_empty() {
                return Err(Error::InvalidInput("auxiliary symbol needs a name".into()));
            }
        }
        Ok(Context {
            embeddings,
            prime,
            aux,
        })
    }

    /// Concrete-prime context without an auxiliary symbol.
    pub fn concrete(degrees: &[usize], p: i64) -> Result<Context> {
        Context::new(EmbeddingSet::new(degrees)?, PrimeSpec::Fixed(p), None)
    }

    /// Symbolic-prime context, optionally with an auxiliary symbol.
    pub fn symbolic(degrees: &[usize], pmin: i64, aux: Option<(&str, i64)>) -> Result<Context> {
        Context::new(
            EmbeddingSet::new(degrees)?,
            PrimeSpec::Symbolic { min: pmin },
            aux.map(|(name, min)| AuxSymbol {
                name: name.to_string(),
                min,
            }),
        )
    }

    pub fn degree(&self) -> usize {
        self.embeddings.degree()
    }

    /// The prime as a coefficient (folded to an integer when fixed).
    pub fn p_coeff(&self) -> Coeff {
        match self.prime {
            PrimeSpec::Fixed(p) => Coeff::int(p),
            PrimeSpec::Symbolic { .. } => Coeff::p(),
        }
    }

    /// Smallest value the prime can take.
    pub fn pmin(&self) -> i64 {
        match self.prime {
            PrimeSpec::Fixed(p) => p,
            PrimeSpec::Symbolic { min } => min,
        }
    }

    fn aux_min(&self) -> i64 {
        self.aux.as_ref().map(|a| a.min).unwrap_or(0)
    }

    pub fn aux_name(&self) -> &str {
        self.aux.as_ref().map(|a| a.name.as_str()).unwrap_or("κ")
    }

    /// Folds fixed-prime terms into the constant and rejects auxiliary terms
    /// when no auxiliary symbol is declared. All stored coefficients are kept
    /// in this normal form, so structural equality is semantic equality.
    pub fn normalize(&self, c: Coeff) -> Result<Coeff> {
        if c.aux_coef != 0 && self.aux.is_none() {
            return Err(Error::InvalidInput(
                "coefficient uses an auxiliary symbol but none is declared".into(),
            ));
        }
        match self.prime {
            PrimeSpec::Fixed(p) => Ok(Coeff {
                p_coef: 0,
                aux_coef: c.aux_coef,
                constant: c.constant + c.p_coef * p,
            }),
            PrimeSpec::Symbolic { .. } => Ok(c),
        }
    }

    /// Canonical string form: terms ordered `p`, aux, constant; zero terms
    /// omitted; unit coefficients elided; `0` when everything vanishes.
    pub fn render(&self, c: &Coeff) -> String {
        let mut out = String::new();
        let push_term = |coef: i64, sym: Option<&str>, out: &mut String| {
            if coef == 0 {
                return;
            }
            let first = out.is_empty();
            let (sign, mag) = if coef < 0 { ("-", -coef) } else { ("+", coef) };
            if !first || coef < 0 {
                out.push_str(sign);
            }
            match sym {
                Some(s) => {
                    if mag != 1 {
                        out.push_str(&mag.to_string());
                    }
                    out.push_str(s);
                }
                None => out.push_str(&mag.to_string()),
            }
        };
        push_term(c.p_coef, Some("p"), &mut out);
        push_term(c.aux_coef, Some(self.aux_name()), &mut out);
        push_term(c.constant, None, &mut out);
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    /// Parses one coefficient in the canonical grammar (signed sums of `INT`,
    /// `p`, `INT p`, aux, `INT aux`). Accepts an optional `*` between a
    /// coefficient and its symbol, the ASCII alias `kappa` for `κ`, and a
    /// Unicode minus sign. The result is normalized.
    pub fn parse_coeff(&self, input: &str) -> Result<Coeff> {
        let cleaned: String = input
            .chars()
            .map(|ch| if ch == '\u{2212}' { '-' } else { ch })
            .filter(|ch| !ch.is_whitespace())
            .collect();
        if cleaned.is_empty() {
            return Err(Error::InvalidInput("empty coefficient".into()));
        }
        let bad = |why: &str| Error::InvalidInput(format!("cannot parse `{input}`: {why}"));

        let mut total = Coeff::ZERO;
        let mut rest = cleaned.as_str();
        let mut first = true;
        while !rest.is_empty() {
            let sign = if let Some(r) = rest.strip_prefix('-') {
                rest = r;
                -1
            } else if let Some(r) = rest.strip_prefix('+') {
                if first {
                    return Err(bad("leading `+`"));
                }
                rest = r;
                1
            } else if first {
                1
            } else {
                return Err(bad("expected `+` or `-` between terms"));
            };
            first = false;

            let digits_end = rest.find(|ch: char| !ch.is_ascii_digit()).unwrap_or(rest.len());
            let (digits, mut after) = rest.split_at(digits_end);
            let mag: Option<i64> = if digits.is_empty() {
                None
            } else {
                Some(
                    digits
                        .parse()
                        .map_err(|_| bad("coefficient out of range"))?,
                )
            };
            if mag.is_some() {
                if let Some(r) = after.strip_prefix('*') {
                    after = r;
                }
            }

            let aux_name = self.aux_name();
            let (sym, after) = if let Some(r) = after.strip_prefix('p') {
                (Some('p'), r)
            } else if let Some(r) = after.strip_prefix(aux_name) {
                (Some('a'), r)
            } else if let Some(r) = after.strip_prefix("kappa") {
                (Some('a'), r)
            } else if let Some(r) = after.strip_prefix('κ') {
                (Some('a'), r)
            } else {
                (None, after)
            };

            let coef = sign * mag.unwrap_or(1);
            match sym {
                Some('p') => total.p_coef += coef,
                Some(_) => total.aux_coef += coef,
                None => {
                    if mag.is_none() {
                        return Err(bad("term with neither digits nor a symbol"));
                    }
                    total.constant += coef;
                }
            }
            rest = after;
        }
        self.normalize(total)
    }

    /// Parses a comma-separated coefficient vector.
    pub fn parse_vector(&self, input: &str) -> Result<Vec<Coeff>> {
        input.split(',').map(|s| self.parse_coeff(s)).collect()
    }

    pub fn render_vector(&self, v: &[Coeff]) -> Vec<String> {
        v.iter().map(|c| self.render(c)).collect()
    }

    /// Evaluates a coefficient under an assignment. The assignment must cover
    /// every symbol the coefficient mentions and respect the lower bounds.
    pub fn eval_coeff(&self, c: Coeff, asg: &Assignment) -> Result<i64> {
        let mut value = c.constant;
        if c.p_coef != 0 {
            let p = match self.prime {
                PrimeSpec::Fixed(p) => p,
                PrimeSpec::Symbolic { .. } => asg.p.ok_or_else(|| {
                    Error::InvalidInput("assignment missing a value for p".into())
                })?,
            };
            value += c.p_coef * p;
        }
        if c.aux_coef != 0 {
            let aux = asg.aux.ok_or_else(|| {
                Error::InvalidInput("assignment missing a value for the auxiliary symbol".into())
            })?;
            value += c.aux_coef * aux;
        }
        self.check_assignment(asg)?;
        Ok(value)
    }

    /// Validates provided assignment values against the declared bounds.
    pub fn check_assignment(&self, asg: &Assignment) -> Result<()> {
        if let Some(p) = asg.p {
            if p < self.pmin() || p < 2 {
                return Err(Error::InvalidInput(format!(
                    "assigned p = {p} violates the lower bound {}",
                    self.pmin().max(2)
                )));
            }
        }
        if let Some(a) = asg.aux {
            let min = self.aux_min();
            if self.aux.is_some() && a < min {
                return Err(Error::InvalidInput(format!(
                    "assigned {} = {a} violates the lower bound {min}",
                    self.aux_name()
                )));
            }
        }
        Ok(())
    }

    /// A fully concrete context with the symbols replaced by the assignment.
    /// Requires a value for every symbol the context declares.
    pub fn instantiate(&self, asg: &Assignment) -> Result<Context> {
        self.check_assignment(asg)?;
        let p = match self.prime {
            PrimeSpec::Fixed(p) => p,
            PrimeSpec::Symbolic { .. } => asg.p.ok_or_else(|| {
                Error::InvalidInput("instantiation needs a value for p".into())
            })?,
        };
        if self.aux.is_some() && asg.aux.is_none() {
            return Err(Error::InvalidInput(format!(
                "instantiation needs a value for {}",
                self.aux_name()
            )));
        }
        Context::new(self.embeddings.clone(), PrimeSpec::Fixed(p), None)
    }

    // ---- comparisons -----------------------------------------------------

    /// `a < b` over every instantiation respecting the bounds.
    pub fn lt(&self, a: Coeff, b: Coeff) -> Tri {
        self.positive(Quad::from_coeff(b - a))
    }

    /// `a ≤ b`.
    pub fn le(&self, a: Coeff, b: Coeff) -> Tri {
        self.lt(b, a).not()
    }

    pub fn gt(&self, a: Coeff, b: Coeff) -> Tri {
        self.lt(b, a)
    }

    pub fn ge(&self, a: Coeff, b: Coeff) -> Tri {
        self.le(b, a)
    }

    pub fn eq(&self, a: Coeff, b: Coeff) -> Tri {
        self.le(a, b).and(self.le(b, a))
    }

    pub fn ne(&self, a: Coeff, b: Coeff) -> Tri {
        self.eq(a, b).not()
    }

    /// `p·a < b`: the slope comparison used by the minimal-cone test and the
    /// divisibility criterion. Quadratic in the symbols when `p` is symbolic.
    pub fn lt_scaled(&self, a: Coeff, b: Coeff) -> Tri {
        let scaled = match self.prime {
            PrimeSpec::Fixed(p) => Quad::from_coeff(a.scale(p)),
            PrimeSpec::Symbolic { .. } => Quad {
                c: 0,
                p: a.constant,
                a: 0,
                pp: a.p_coef,
                pa: a.aux_coef,
            },
        };
        self.positive(Quad::from_coeff(b).sub(scaled))
    }

    /// `p·a ≥ b`.
    pub fn ge_scaled(&self, a: Coeff, b: Coeff) -> Tri {
        self.lt_scaled(a, b).not()
    }

    /// Is `q > 0` for every instantiation with `p ≥ pmin`, `aux ≥ auxmin`?
    ///
    /// Substituting `p = pmin + x`, `aux = auxmin + y` (integers x, y ≥ 0)
    /// re-expands q over {1, x, y, x², xy}. If every non-constant shifted
    /// coefficient is ≥ 0 the minimum over the domain sits at the corner, so
    /// the constant term decides; if every one is ≤ 0 the maximum sits there.
    /// Mixed signs yield `Indeterminate`.
    fn positive(&self, q: Quad) -> Tri {
        let pm = self.pmin();
        let am = self.aux_min();
        let constant = q.c + q.p * pm + q.a * am + q.pp * pm * pm + q.pa * pm * am;
        let x = q.p + 2 * q.pp * pm + q.pa * am;
        let y = q.a + q.pa * pm;
        let xx = q.pp;
        let xy = q.pa;
        let shifted = [x, y, xx, xy];
        if shifted.iter().all(|&v| v >= 0) {
            if constant > 0 {
                Tri::Always
            } else if shifted.iter().all(|&v| v == 0) {
                Tri::Never
            } else {
                Tri::Indeterminate
            }
        } else if shifted.iter().all(|&v| v <= 0) {
            if constant <= 0 {
                Tri::Never
            } else {
                Tri::Indeterminate
            }
        } else {
            Tri::Indeterminate
        }
    }
}

/// Integer polynomial over the monomials {1, p, aux, p², p·aux}.
#[derive(Debug, Clone, Copy, Default)]
struct Quad {
    c: i64,
    p: i64,
    a: i64,
    pp: i64,
    pa: i64,
}

impl Quad {
    fn from_coeff(c: Coeff) -> Quad {
        Quad {
            c: c.constant,
            p: c.p_coef,
            a: c.aux_coef,
            pp: 0,
            pa: 0,
        }
    }

    fn sub(self, rhs: Quad) -> Quad {
        Quad {
            c: self.c - rhs.c,
            p: self.p - rhs.p,
            a: self.a - rhs.a,
            pp: self.pp - rhs.pp,
            pa: self.pa - rhs.pa,
        }
    }
}
