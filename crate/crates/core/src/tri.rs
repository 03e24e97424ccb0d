//! Three-valued verdicts for statements quantified over symbol instantiations.
//!
//! A [`Tri`] answers "does this hold for every instantiation respecting the
//! declared lower bounds?": [`Tri::Always`] and [`Tri::Never`] are definitive,
//! [`Tri::Indeterminate`] means the bounds do not decide the statement.
//! Connectives follow Kleene's strong three-valued logic, which keeps every
//! verdict sound under refinement of the bounds.

/// Verdict of a comparison or predicate under symbol lower bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tri {
    /// Holds for every instantiation.
    Always,
    /// Holds for no instantiation.
    Never,
    /// Holds for some instantiations and fails for others, or is undecided
    /// by the sound (incomplete) comparison rules.
    Indeterminate,
}

impl Tri {
    pub fn from_bool(b: bool) -> Tri {
        if b {
            Tri::Always
        } else {
            Tri::Never
        }
    }

    pub fn not(self) -> Tri {
        match self {
            Tri::Always => Tri::Never,
            Tri::Never => Tri::Always,
            Tri::Indeterminate => Tri::Indeterminate,
        }
    }

    pub fn and(self, other: Tri) -> Tri {
        match (self, other) {
            (Tri::Never, _) | (_, Tri::Never) => Tri::Never,
            (Tri::Always, Tri::Always) => Tri::Always,
            _ => Tri::Indeterminate,
        }
    }

    pub fn or(self, other: Tri) -> Tri {
        match (self, other) {
            (Tri::Always, _) | (_, Tri::Always) => Tri::Always,
            (Tri::Never, Tri::Never) => Tri::Never,
            _ => Tri::Indeterminate,
        }
    }

    /// Conjunction over an iterator (`Always` on empty input).
    pub fn all<I: IntoIterator<Item = Tri>>(iter: I) -> Tri {
        iter.into_iter().fold(Tri::Always, Tri::and)
    }

    /// Disjunction over an iterator (`Never` on empty input).
    pub fn any<I: IntoIterator<Item = Tri>>(iter: I) -> Tri {
        iter.into_iter().fold(Tri::Never, Tri::or)
    }

    pub fn is_always(self) -> bool {
        self == Tri::Always
    }

    pub fn is_never(self) -> bool {
        self == Tri::Never
    }

    pub fn is_indeterminate(self) -> bool {
        self == Tri::Indeterminate
    }

    /// Stable lowercase label used in every serialized output.
    pub fn as_str(self) -> &'static str {
        match self {
            Tri::Always => "always",
            Tri::Never => "never",
            Tri::Indeterminate => "indeterminate",
        }
    }
}

impl std::fmt::Display for Tri {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}
