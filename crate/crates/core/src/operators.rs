//! The weight-shift calculus: partial Hasse invariant multiplication and
//! division, partial theta operators, the slope divisibility criterion, and
//! greedy reduction into the minimal cone.
//!
//! All shifts are uniform across orbit sizes. Multiplying by the partial
//! Hasse invariant at τ adds `p·e_{Frob⁻¹∘τ} − e_τ` to `k` (so `(p−1)·e_τ`
//! on a Frobenius-fixed embedding); the partial theta operator at τ adds
//! `e_τ + p·e_{Frob⁻¹∘τ}` to `k` and subtracts `e_τ` from `l`.
//!
//! [`divide_hasse`] performs the arithmetic of removing one Hasse factor
//! unconditionally; whether a division is *legal* is a separate verdict
//! ([`dk_divisibility`] or a matching-identity justification recorded by the
//! derivation layer), so proof-guided pipelines can divide where the slope
//! criterion alone would not conclude.
//!
//! [`FormExpr`] is a tree of symbolic forms: a base form with user-declared
//! properties, extended by Hasse multiplications and theta applications.
//! Each node carries its computed weight and eigenform property flags; the
//! flags are only ever set on the base and propagate upward by fixed rules,
//! never directly on interior nodes.

use crate::coeff::{Coeff, Context};
use crate::embeddings::Tau;
use crate::error::{Error, Result};
use crate::tri::Tri;
use crate::weight::{in_minimal_cone, vec_add, vec_sub, Weight};

/// The `k`-shift of multiplying by the partial Hasse invariant at `tau`:
/// `p·e_{Frob⁻¹∘tau} − e_tau`, as a full-length vector.
pub fn hasse_weight(ctx: &Context, tau: Tau) -> Result<Vec<Coeff>> {
    ctx.embeddings.check(tau)?;
    let mut shift = vec![Coeff::ZERO; ctx.degree()];
    let em = &ctx.embeddings;
    shift[em.flat(em.frob_inv(tau))] = shift[em.flat(em.frob_inv(tau))] + ctx.p_coeff();
    shift[em.flat(tau)] = shift[em.flat(tau)] - Coeff::int(1);
    Ok(shift)
}

/// Weight of the partial theta operator applied at `tau`: `k` gains
/// `e_tau + p·e_{Frob⁻¹∘tau}`, `l` loses `e_tau`.
pub fn theta_shift(ctx: &Context, w: &Weight, tau: Tau) -> Result<Weight> {
    ctx.embeddings.check(tau)?;
    let em = &ctx.embeddings;
    let mut k = w.k().to_vec();
    let mut l = w.l().to_vec();
    k[em.flat(tau)] = k[em.flat(tau)] + Coeff::int(1);
    k[em.flat(em.frob_inv(tau))] = k[em.flat(em.frob_inv(tau))] + ctx.p_coeff();
    l[em.flat(tau)] = l[em.flat(tau)] - Coeff::int(1);
    Weight::new(ctx, k, l)
}

/// Slope criterion for divisibility by the partial Hasse invariant at `tau`:
/// `p·k_tau < k_{Frob⁻¹∘tau}`.
pub fn dk_divisibility(ctx: &Context, k: &[Coeff], tau: Tau) -> Result<Tri> {
    ctx.embeddings.check(tau)?;
    let em = &ctx.embeddings;
    Ok(ctx.lt_scaled(k[em.flat(tau)], k[em.flat(em.frob_inv(tau))]))
}

/// Removes one partial Hasse factor at `tau` from a bare `k`-vector:
/// `k + e_tau − p·e_{Frob⁻¹∘tau}`. Pure arithmetic; see the module notes on
/// legality.
pub fn divide_hasse(ctx: &Context, k: &[Coeff], tau: Tau) -> Result<Vec<Coeff>> {
    Ok(vec_sub(k, &hasse_weight(ctx, tau)?))
}

/// Order in which reduction scans for a divisible embedding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrderPolicy {
    /// Canonical order: lowest orbit, lowest position first.
    IndexOrder,
    /// A fixed priority list; must be a permutation of all embeddings.
    Priority(Vec<Tau>),
}

/// Result of [`reduce_to_min_cone`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    /// Vector at which the reduction stopped.
    pub final_k: Vec<Coeff>,
    /// Divisions applied, in application order.
    pub chain: Vec<Tau>,
    /// Cone membership of `final_k`: `Always` when certified, or
    /// `Indeterminate` when the symbol bounds leave it (and therefore any
    /// further division) undecided. Never `Never`: a vector outside the cone
    /// always offers a division.
    pub cone: Tri,
}

/// Divides out partial Hasse invariants, guided by the slope criterion,
/// until the vector is in the minimal cone or no division is certain.
///
/// At each step the policy order is scanned for the first embedding whose
/// criterion verdict is `Always`; that factor is divided out and the scan
/// restarts. Arbitrary integer vectors can descend forever (no minimal-cone
/// representative is reachable), so a step budget proportional to the
/// input's magnitude guards termination; exceeding it is an input error.
pub fn reduce_to_min_cone(
    ctx: &Context,
    k: &[Coeff],
    policy: &OrderPolicy,
) -> Result<Reduction> {
    let em = &ctx.embeddings;
    let d = ctx.degree();
    if k.len() != d {
        return Err(Error::InvalidInput(format!(
            "vector must have length {d}, got {}",
            k.len()
        )));
    }
    let order: Vec<Tau> = match policy {
        OrderPolicy::IndexOrder => em.taus().collect(),
        OrderPolicy::Priority(order) => {
            let mut seen = vec![false; d];
            for &t in order {
                em.check(t)?;
                if std::mem::replace(&mut seen[em.flat(t)], true) {
                    return Err(Error::InvalidInput(format!(
                        "priority order repeats embedding {t}"
                    )));
                }
            }
            if order.len() != d {
                return Err(Error::InvalidInput(
                    "priority order must list every embedding exactly once".into(),
                ));
            }
            order.clone()
        }
    };

    // Corner magnitude of the input, evaluated at the symbol lower bounds.
    let corner: i64 = k
        .iter()
        .map(|c| (c.constant + c.p_coef * ctx.pmin()).abs() + c.aux_coef.abs() * 64)
        .sum();
    let budget = 1024 + 16 * corner.unsigned_abs();

    let mut cur = k.to_vec();
    let mut chain = Vec::new();
    let mut steps: u64 = 0;
    loop {
        let next = order
            .iter()
            .copied()
            .find(|&t| dk_divisibility(ctx, &cur, t).map(Tri::is_always).unwrap_or(false));
        match next {
            Some(t) => {
                cur = divide_hasse(ctx, &cur, t)?;
                chain.push(t);
                steps += 1;
                if steps > budget {
                    return Err(Error::InvalidInput(format!(
                        "reduction exceeded {budget} steps; no minimal-cone representative reachable from this vector"
                    )));
                }
            }
            None => {
                let cone = in_minimal_cone(ctx, &cur);
                if cone.is_never() {
                    // A vector strictly outside the cone violates the slope
                    // condition somewhere, which is exactly an Always
                    // division; stalling here is impossible.
                    return Err(Error::Internal(
                        "reduction stalled strictly outside the minimal cone".into(),
                    ));
                }
                return Ok(Reduction {
                    final_k: cur,
                    chain,
                    cone,
                });
            }
        }
    }
}

/// Eigenform property flag: established, or not known.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flag {
    Yes,
    Unknown,
}

impl Flag {
    pub fn as_str(self) -> &'static str {
        match self {
            Flag::Yes => "yes",
            Flag::Unknown => "unknown",
        }
    }

    pub fn is_yes(self) -> bool {
        self == Flag::Yes
    }
}

/// Eigenform properties tracked through the operator calculus. The chain
/// strongly stabilised ⇒ stabilised ⇒ normalised is enforced on
/// construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EigenProps {
    pub normalised: Flag,
    pub stabilised: Flag,
    pub strongly_stabilised: Flag,
}

impl EigenProps {
    pub fn unknown() -> EigenProps {
        EigenProps {
            normalised: Flag::Unknown,
            stabilised: Flag::Unknown,
            strongly_stabilised: Flag::Unknown,
        }
    }

    pub fn normalised() -> EigenProps {
        EigenProps {
            normalised: Flag::Yes,
            stabilised: Flag::Unknown,
            strongly_stabilised: Flag::Unknown,
        }
    }

    pub fn stabilised() -> EigenProps {
        EigenProps {
            normalised: Flag::Yes,
            stabilised: Flag::Yes,
            strongly_stabilised: Flag::Unknown,
        }
    }

    pub fn strongly_stabilised() -> EigenProps {
        EigenProps {
            normalised: Flag::Yes,
            stabilised: Flag::Yes,
            strongly_stabilised: Flag::Yes,
        }
    }

    /// Closes the flags upward along the implication chain.
    fn closed(mut self) -> EigenProps {
        if self.strongly_stabilised.is_yes() {
            self.stabilised = Flag::Yes;
        }
        if self.stabilised.is_yes() {
            self.normalised = Flag::Yes;
        }
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Node {
    Base { assume_hecke_vanishing: bool },
    MulHasse { tau: Tau, child: Box<FormExpr> },
    ApplyTheta { tau: Tau, child: Box<FormExpr> },
}

/// A symbolic modular form: a base form extended by partial Hasse invariant
/// multiplications and partial theta applications, carrying its computed
/// weight and propagated eigenform properties.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormExpr {
    node: Node,
    weight: Weight,
    props: EigenProps,
}

impl FormExpr {
    /// A base form of the given weight. `assume_hecke_vanishing` declares the
    /// (uncomputed) assumption that the relevant p-Hecke operators annihilate
    /// the theta companions built from this form; it feeds the one flag
    /// upgrade that cannot be derived from the calculus alone.
    pub fn base(weight: Weight, props: EigenProps, assume_hecke_vanishing: bool) -> FormExpr {
        FormExpr {
            node: Node::Base {
                assume_hecke_vanishing,
            },
            weight,
            props: props.closed(),
        }
    }

    /// Multiplies by the partial Hasse invariant at `tau`.
    ///
    /// Flags are preserved when the embedding is Frobenius-fixed or the
    /// child's `k_tau` is at least 3 for every instantiation. The one other
    /// justified case: under the base's vanishing assumption, multiplying a
    /// theta application at the same embedding whose child was stabilised
    /// yields a strongly stabilised form. Anything else drops to unknown.
    pub fn mul_hasse(self, ctx: &Context, tau: Tau) -> Result<FormExpr> {
        ctx.embeddings.check(tau)?;
        let weight = self
            .weight
            .with_k(ctx, vec_add(self.weight.k(), &hasse_weight(ctx, tau)?))?;
        let fixed = ctx.embeddings.orbit_size(tau.orbit) == 1;
        let entry = self.weight.k_at(ctx, tau);
        let preserve = fixed || ctx.ge(entry, Coeff::int(3)).is_always();
        let props = if preserve {
            self.props
        } else if self.assumes_hecke_vanishing()
            && matches!(&self.node, Node::ApplyTheta { tau: t, .. } if *t == tau)
            && self.props.stabilised.is_yes()
        {
            EigenProps::strongly_stabilised()
        } else {
            EigenProps::unknown()
        };
        Ok(FormExpr {
            node: Node::MulHasse {
                tau,
                child: Box::new(self),
            },
            weight,
            props,
        })
    }

    /// Applies the partial theta operator at `tau`. Flags are preserved, and
    /// a stabilised child becomes strongly stabilised.
    pub fn apply_theta(self, ctx: &Context, tau: Tau) -> Result<FormExpr> {
        let weight = theta_shift(ctx, &self.weight, tau)?;
        let mut props = self.props;
        if props.stabilised.is_yes() {
            props.strongly_stabilised = Flag::Yes;
        }
        Ok(FormExpr {
            node: Node::ApplyTheta {
                tau,
                child: Box::new(self),
            },
            weight,
            props: props.closed(),
        })
    }

    pub fn weight(&self) -> &Weight {
        &self.weight
    }

    pub fn props(&self) -> EigenProps {
        self.props
    }

    /// Whether the tree's base declares the Hecke-vanishing assumption.
    pub fn assumes_hecke_vanishing(&self) -> bool {
        match &self.node {
            Node::Base {
                assume_hecke_vanishing,
            } => *assume_hecke_vanishing,
            Node::MulHasse { child, .. } | Node::ApplyTheta { child, .. } => {
                child.assumes_hecke_vanishing()
            }
        }
    }

    /// JSON tree: `{op, tau?, child?, weight, props}`.
    pub fn to_json(&self, ctx: &Context) -> serde_json::Value {
        let mut obj = serde_json::Map::new();
        let (op, tau, child) = match &self.node {
            Node::Base { .. } => ("base", None, None),
            Node::MulHasse { tau, child } => ("hasse", Some(*tau), Some(child)),
            Node::ApplyTheta { tau, child } => ("theta", Some(*tau), Some(child)),
        };
        obj.insert("op".into(), op.into());
        if let Some(t) = tau {
            obj.insert("tau".into(), serde_json::json!([t.orbit, t.pos]));
        }
        if let Some(c) = child {
            obj.insert("child".into(), c.to_json(ctx));
        }
        obj.insert(
            "weight".into(),
            serde_json::json!({
                "k": self.weight.k_strings(ctx),
                "l": self.weight.l_strings(ctx),
            }),
        );
        obj.insert(
            "props".into(),
            serde_json::json!({
                "normalised": self.props.normalised.as_str(),
                "stabilised": self.props.stabilised.as_str(),
                "strongly_stabilised": self.props.strongly_stabilised.as_str(),
            }),
        );
        serde_json::Value::Object(obj)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::Assignment;

    fn tau(orbit: usize, pos: usize) -> Tau {
        Tau::new(orbit, pos)
    }

    fn sym3() -> Context {
        Context::symbolic(&[3], 2, Some(("κ", 3))).unwrap()
    }

    #[test]
    fn hasse_weight_examples() {
        let ctx = sym3();
        // At τ_0 of a 3-orbit: +p on τ_1, −1 on τ_0.
        let h0 = hasse_weight(&ctx, tau(0, 0)).unwrap();
        assert_eq!(h0, vec![Coeff::int(-1), Coeff::p(), Coeff::ZERO]);
        // Wrap: at τ_2 the p lands on τ_0.
        let h2 = hasse_weight(&ctx, tau(0, 2)).unwrap();
        assert_eq!(h2, vec![Coeff::p(), Coeff::ZERO, Coeff::int(-1)]);
        // Frobenius-fixed orbit: (p−1)·e_τ.
        let ctx1 = Context::symbolic(&[1], 2, None).unwrap();
        let h = hasse_weight(&ctx1, tau(0, 0)).unwrap();
        assert_eq!(h, vec![Coeff::new(1, 0, -1)]);
        // Concrete prime folds.
        let ctx5 = Context::concrete(&[2], 5).unwrap();
        assert_eq!(
            hasse_weight(&ctx5, tau(0, 1)).unwrap(),
            vec![Coeff::int(5), Coeff::int(-1)]
        );
    }

    #[test]
    fn theta_shift_examples() {
        let ctx = sym3();
        // Weight of f·Ha_0 in the κ example, theta'd at τ_2.
        let w = Weight::with_zero_l(&ctx, vec![Coeff::ZERO, Coeff::p() + Coeff::int(1), Coeff::aux()])
            .unwrap();
        let shifted = theta_shift(&ctx, &w, tau(0, 2)).unwrap();
        assert_eq!(
            shifted.k(),
            &[Coeff::p(), Coeff::p() + Coeff::int(1), Coeff::aux() + Coeff::int(1)]
        );
        assert_eq!(shifted.l(), &[Coeff::ZERO, Coeff::ZERO, Coeff::int(-1)]);

        // Same at k_2 = 2: (0, p, p+2) → ((p, p, p+3), (0, 0, −1)).
        let w = Weight::with_zero_l(
            &ctx,
            vec![Coeff::ZERO, Coeff::p(), Coeff::p() + Coeff::int(2)],
        )
        .unwrap();
        let shifted = theta_shift(&ctx, &w, tau(0, 2)).unwrap();
        assert_eq!(
            shifted.k(),
            &[Coeff::p(), Coeff::p(), Coeff::p() + Coeff::int(3)]
        );
        assert_eq!(shifted.l(), &[Coeff::ZERO, Coeff::ZERO, Coeff::int(-1)]);

        // Frobenius-fixed orbit: net (p+1)·e_τ on k.
        let ctx1 = Context::symbolic(&[1], 2, None).unwrap();
        let w = Weight::with_zero_l(&ctx1, vec![Coeff::int(1)]).unwrap();
        let shifted = theta_shift(&ctx1, &w, tau(0, 0)).unwrap();
        assert_eq!(shifted.k(), &[Coeff::new(1, 0, 2)]);
        assert_eq!(shifted.l(), &[Coeff::int(-1)]);
    }

    #[test]
    fn theta_twice_on_fixed_orbit() {
        let ctx1 = Context::symbolic(&[1], 2, None).unwrap();
        let base = FormExpr::base(
            Weight::with_zero_l(&ctx1, vec![Coeff::int(1)]).unwrap(),
            EigenProps::unknown(),
            false,
        );
        let twice = base
            .apply_theta(&ctx1, tau(0, 0))
            .unwrap()
            .apply_theta(&ctx1, tau(0, 0))
            .unwrap();
        assert_eq!(twice.weight().k(), &[Coeff::new(2, 0, 3)]);
        assert_eq!(twice.weight().l(), &[Coeff::int(-2)]);
    }

    #[test]
    fn dk_criterion() {
        let ctx5 = Context::concrete(&[4], 5).unwrap();
        let k: Vec<Coeff> = [0, 5, 5, 6].map(Coeff::int).to_vec();
        assert_eq!(dk_divisibility(&ctx5, &k, tau(0, 0)).unwrap(), Tri::Always);
        assert_eq!(dk_divisibility(&ctx5, &k, tau(0, 1)).unwrap(), Tri::Never);

        let ctx = sym3();
        let k = vec![Coeff::ZERO, Coeff::p() + Coeff::int(1), Coeff::aux()];
        // p·0 < p+1 always.
        assert_eq!(dk_divisibility(&ctx, &k, tau(0, 0)).unwrap(), Tri::Always);
        // p·(p+1) < κ never under κ unbounded above? κ ≥ 3 only: indeterminate
        // is the honest answer for p·κ-free comparison... here p(p+1) vs κ:
        // at (2,3): 6 < 3 false; κ can exceed any fixed p(p+1): mixed.
        assert_eq!(
            dk_divisibility(&ctx, &k, tau(0, 1)).unwrap(),
            Tri::Indeterminate
        );
    }

    #[test]
    fn divide_inverts_multiply() {
        let ctx = sym3();
        let k = vec![Coeff::int(1), Coeff::int(1), Coeff::aux()];
        for t in ctx.embeddings.taus() {
            let mul = vec_add(&k, &hasse_weight(&ctx, t).unwrap());
            let back = divide_hasse(&ctx, &mul, t).unwrap();
            assert_eq!(back, k);
        }
        // Fixed orbit at p−1 divides to zero.
        let ctx1 = Context::symbolic(&[1], 2, None).unwrap();
        let k = vec![Coeff::new(1, 0, -1)];
        assert_eq!(
            divide_hasse(&ctx1, &k, tau(0, 0)).unwrap(),
            vec![Coeff::ZERO]
        );
    }

    #[test]
    fn reduce_concrete_chain() {
        let ctx5 = Context::concrete(&[4], 5).unwrap();
        let k: Vec<Coeff> = [0, 5, 5, 6].map(Coeff::int).to_vec();
        let red = reduce_to_min_cone(&ctx5, &k, &OrderPolicy::IndexOrder).unwrap();
        assert_eq!(red.final_k, [1, 1, 1, 1].map(Coeff::int).to_vec());
        assert_eq!(red.chain, vec![tau(0, 0), tau(0, 1), tau(0, 2)]);
        assert_eq!(red.cone, Tri::Always);
    }

    #[test]
    fn reduce_already_in_cone() {
        let ctx2 = Context::concrete(&[1], 2).unwrap();
        let red = reduce_to_min_cone(&ctx2, &[Coeff::ZERO], &OrderPolicy::IndexOrder).unwrap();
        assert_eq!(red.final_k, vec![Coeff::ZERO]);
        assert!(red.chain.is_empty());
        assert_eq!(red.cone, Tri::Always);
    }

    #[test]
    fn reduce_symbolic_stall_is_reported() {
        // The eight-entry cofactor vector stalls at (1,1,κ,2,2,1,2,2): cone
        // membership needs p ≥ κ, which pmin=2, κ ≥ 3 cannot decide.
        let ctx = Context::symbolic(&[8], 2, Some(("κ", 3))).unwrap();
        let k = vec![
            Coeff::ZERO,
            Coeff::p() + Coeff::int(1),
            Coeff::aux(),
            Coeff::int(1),
            Coeff::p() + Coeff::int(2),
            Coeff::ZERO,
            Coeff::p() + Coeff::int(1),
            Coeff::p() + Coeff::int(2),
        ];
        let red = reduce_to_min_cone(&ctx, &k, &OrderPolicy::IndexOrder).unwrap();
        let expected: Vec<Coeff> = vec![
            Coeff::int(1),
            Coeff::int(1),
            Coeff::aux(),
            Coeff::int(2),
            Coeff::int(2),
            Coeff::int(1),
            Coeff::int(2),
            Coeff::int(2),
        ];
        assert_eq!(red.final_k, expected);
        assert_eq!(
            red.chain,
            vec![tau(0, 0), tau(0, 3), tau(0, 5), tau(0, 6)]
        );
        assert_eq!(red.cone, Tri::Indeterminate);
    }

    #[test]
    fn reduce_rejects_divergent_input() {
        // (0, 1) at p = 5 descends forever; the budget trips.
        let ctx5 = Context::concrete(&[2], 5).unwrap();
        let err = reduce_to_min_cone(
            &ctx5,
            &[Coeff::ZERO, Coeff::int(1)],
            &OrderPolicy::IndexOrder,
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));
    }

    #[test]
    fn reduce_policy_validation() {
        let ctx5 = Context::concrete(&[2], 5).unwrap();
        let k = [3, 3].map(Coeff::int).to_vec();
        let bad = OrderPolicy::Priority(vec![tau(0, 0), tau(0, 0)]);
        assert!(reduce_to_min_cone(&ctx5, &k, &bad).is_err());
        let short = OrderPolicy::Priority(vec![tau(0, 1)]);
        assert!(reduce_to_min_cone(&ctx5, &k, &short).is_err());
        let ok = OrderPolicy::Priority(vec![tau(0, 1), tau(0, 0)]);
        assert!(reduce_to_min_cone(&ctx5, &k, &ok).is_ok());
    }

    #[test]
    fn props_theta_upgrades_stabilised() {
        let ctx = sym3();
        let w = Weight::with_zero_l(&ctx, vec![Coeff::int(3); 3]).unwrap();
        let f = FormExpr::base(w, EigenProps::stabilised(), false);
        let t = f.apply_theta(&ctx, tau(0, 1)).unwrap();
        assert_eq!(t.props(), EigenProps::strongly_stabilised());
    }

    #[test]
    fn props_hasse_preserves_when_safe() {
        let ctx = sym3();
        // k_τ = κ ≥ 3 at the multiplied embedding: preserved.
        let w = Weight::with_zero_l(&ctx, vec![Coeff::aux(), Coeff::int(1), Coeff::int(1)])
            .unwrap();
        let f = FormExpr::base(w, EigenProps::normalised(), false);
        let m = f.mul_hasse(&ctx, tau(0, 0)).unwrap();
        assert_eq!(m.props(), EigenProps::normalised());

        // k_τ = 2 on a non-fixed embedding: drops to unknown.
        let w = Weight::with_zero_l(&ctx, vec![Coeff::int(2), Coeff::int(1), Coeff::int(1)])
            .unwrap();
        let f = FormExpr::base(w, EigenProps::normalised(), false);
        let m = f.mul_hasse(&ctx, tau(0, 0)).unwrap();
        assert_eq!(m.props(), EigenProps::unknown());

        // Frobenius-fixed embedding preserves regardless of the entry.
        let ctx1 = Context::symbolic(&[1], 2, None).unwrap();
        let w = Weight::with_zero_l(&ctx1, vec![Coeff::int(1)]).unwrap();
        let f = FormExpr::base(w, EigenProps::stabilised(), false);
        let m = f.mul_hasse(&ctx1, tau(0, 0)).unwrap();
        assert_eq!(m.props(), EigenProps::stabilised());
    }

    #[test]
    fn props_hasse_after_theta_under_assumption() {
        let ctx = sym3();
        let w = Weight::with_zero_l(&ctx, vec![Coeff::int(2), Coeff::int(1), Coeff::int(1)])
            .unwrap();
        // Stabilised base, theta then Hasse at the same embedding, with the
        // vanishing assumption: strongly stabilised.
        let f = FormExpr::base(w.clone(), EigenProps::stabilised(), true);
        let g = f
            .apply_theta(&ctx, tau(0, 0))
            .unwrap()
            .mul_hasse(&ctx, tau(0, 0))
            .unwrap();
        assert_eq!(g.props(), EigenProps::strongly_stabilised());

        // Same tree without the assumption: unknown (k_τ at the child is 3
        // after theta... choose entries so the safe case doesn't fire).
        let f = FormExpr::base(w.clone(), EigenProps::stabilised(), false);
        let child = f.apply_theta(&ctx, tau(0, 0)).unwrap();
        assert_eq!(child.weight().k()[0], Coeff::int(3));
        // Entry is exactly 3 ⇒ the ≥3 window preserves; force the interesting
        // branch with a smaller entry.
        let w2 = Weight::with_zero_l(&ctx, vec![Coeff::int(1), Coeff::int(1), Coeff::int(1)])
            .unwrap();
        let f2 = FormExpr::base(w2.clone(), EigenProps::stabilised(), false);
        let g2 = f2
            .apply_theta(&ctx, tau(0, 0))
            .unwrap()
            .mul_hasse(&ctx, tau(0, 0))
            .unwrap();
        assert_eq!(g2.props(), EigenProps::unknown());
        // With the assumption the same shape upgrades.
        let f3 = FormExpr::base(w2, EigenProps::stabilised(), true);
        let g3 = f3
            .apply_theta(&ctx, tau(0, 0))
            .unwrap()
            .mul_hasse(&ctx, tau(0, 0))
            .unwrap();
        assert_eq!(g3.props(), EigenProps::strongly_stabilised());
    }

    #[test]
    fn weights_commute_with_evaluation() {
        let ctx = sym3();
        let w = Weight::with_zero_l(&ctx, vec![Coeff::int(1), Coeff::int(1), Coeff::aux()])
            .unwrap();
        let asg = Assignment::p_aux(5, 4);
        let conc_ctx = ctx.instantiate(&asg).unwrap();
        let wc = w.evaluate(&ctx, &asg).unwrap();
        for t in ctx.embeddings.taus() {
            let sym = theta_shift(&ctx, &w, t).unwrap().evaluate(&ctx, &asg).unwrap();
            let conc = theta_shift(&conc_ctx, &wc, t).unwrap();
            assert_eq!(sym, conc);
        }
    }
}
