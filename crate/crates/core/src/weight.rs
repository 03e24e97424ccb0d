//! Weights `(k, l)`: pairs of coefficient vectors indexed by the embeddings,
//! with the lattice predicates used throughout the derivation pipeline.
//!
//! `k` carries all of the combinatorics; `l` is carried through unchanged by
//! everything except the theta operator. [`is_algebraic`] asks every `k`
//! entry to be at least 2; [`in_minimal_cone`] is the slope condition
//! `p·k_τ ≥ k_{Frob⁻¹∘τ}` at every embedding. Both fold per-coordinate
//! [`Tri`](crate::tri::Tri) verdicts with Kleene conjunction, so a single
//! `Never` coordinate decides the whole predicate even when other coordinates
//! are symbolic.

use crate::coeff::{Assignment, Coeff, Context};
use crate::embeddings::Tau;
use crate::error::{Error, Result};
use crate::tri::Tri;

/// A weight: the pair of coefficient vectors `(k, l)`, both indexed by the
/// context's embedding set in canonical (orbit-major) order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Weight {
    k: Vec<Coeff>,
    l: Vec<Coeff>,
}

impl Weight {
    /// Builds a weight, normalizing entries and checking both vectors have
    /// one entry per embedding.
    pub fn new(ctx: &Context, k: Vec<Coeff>, l: Vec<Coeff>) -> Result<Weight> {
        let d = ctx.degree();
        if k.len() != d || l.len() != d {
            return Err(Error::InvalidInput(format!(
                "weight vectors must have length {d}, got k: {}, l: {}",
                k.len(),
                l.len()
            )));
        }
        let k = k.into_iter().map(|c| ctx.normalize(c)).collect::<Result<_>>()?;
        let l = l.into_iter().map(|c| ctx.normalize(c)).collect::<Result<_>>()?;
        Ok(Weight { k, l })
    }

    /// A weight with the given `k` and zero `l`.
    pub fn with_zero_l(ctx: &Context, k: Vec<Coeff>) -> Result<Weight> {
        let l = vec![Coeff::ZERO; ctx.degree()];
        Weight::new(ctx, k, l)
    }

    /// Parses `k` (and optionally `l`) from comma-separated coefficient
    /// strings; a missing `l` means zero.
    pub fn parse(ctx: &Context, k: &str, l: Option<&str>) -> Result<Weight> {
        let k = ctx.parse_vector(k)?;
        match l {
            Some(l) => Weight::new(ctx, k, ctx.parse_vector(l)?),
            None => Weight::with_zero_l(ctx, k),
        }
    }

    pub fn k(&self) -> &[Coeff] {
        &self.k
    }

    pub fn l(&self) -> &[Coeff] {
        &self.l
    }

    pub fn k_at(&self, ctx: &Context, tau: Tau) -> Coeff {
        self.k[ctx.embeddings.flat(tau)]
    }

    pub fn l_at(&self, ctx: &Context, tau: Tau) -> Coeff {
        self.l[ctx.embeddings.flat(tau)]
    }

    /// Replaces the `k` vector, keeping `l`.
    pub fn with_k(&self, ctx: &Context, k: Vec<Coeff>) -> Result<Weight> {
        Weight::new(ctx, k, self.l.clone())
    }

    /// Canonical string forms of the `k` entries.
    pub fn k_strings(&self, ctx: &Context) -> Vec<String> {
        ctx.render_vector(&self.k)
    }

    pub fn l_strings(&self, ctx: &Context) -> Vec<String> {
        ctx.render_vector(&self.l)
    }

    /// Evaluates both vectors under an assignment covering every symbol that
    /// actually occurs in the weight. Plain-integer weights accept an empty
    /// assignment, even in a symbolic context.
    pub fn evaluate(&self, ctx: &Context, asg: &Assignment) -> Result<Weight> {
        let eval_vec = |v: &[Coeff]| -> Result<Vec<Coeff>> {
            v.iter()
                .map(|&c| ctx.eval_coeff(c, asg).map(Coeff::int))
                .collect()
        };
        Ok(Weight {
            k: eval_vec(&self.k)?,
            l: eval_vec(&self.l)?,
        })
    }

    /// Is every `k` entry at least 2, for every instantiation?
    pub fn is_algebraic(&self, ctx: &Context) -> Tri {
        is_algebraic(ctx, &self.k)
    }
}

/// Entry-wise sum of coefficient vectors.
pub(crate) fn vec_add(a: &[Coeff], b: &[Coeff]) -> Vec<Coeff> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(&x, &y)| x + y).collect()
}

/// Entry-wise difference of coefficient vectors.
pub(crate) fn vec_sub(a: &[Coeff], b: &[Coeff]) -> Vec<Coeff> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(&x, &y)| x - y).collect()
}

/// Evaluates a bare `k`-vector under an assignment.
pub fn evaluate_kvec(ctx: &Context, k: &[Coeff], asg: &Assignment) -> Result<Vec<Coeff>> {
    k.iter()
        .map(|&c| ctx.eval_coeff(c, asg).map(Coeff::int))
        .collect()
}

/// `k_τ ≥ 2` at every embedding.
pub fn is_algebraic(ctx: &Context, k: &[Coeff]) -> Tri {
    Tri::all(k.iter().map(|&c| ctx.ge(c, Coeff::int(2))))
}

/// Minimal-cone membership: `p·k_τ ≥ k_{Frob⁻¹∘τ}` at every embedding.
pub fn in_minimal_cone(ctx: &Context, k: &[Coeff]) -> Tri {
    let em = &ctx.embeddings;
    Tri::all(em.taus().map(|tau| {
        let cur = k[em.flat(tau)];
        let next = k[em.flat(em.frob_inv(tau))];
        ctx.ge_scaled(cur, next)
    }))
}
