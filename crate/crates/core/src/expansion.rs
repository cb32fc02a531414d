//! Hyperideal expansions: inflationary, monotone self-maps of the lattice.

use serde::Serialize;

use crate::elem::ElemSet;
use crate::error::{Error, Result};
use crate::ideals::Analysis;

pub const DELTA0: &str = "delta0";
pub const DELTA1: &str = "delta1";
pub const DELTA_R: &str = "deltaR";
pub const BUILTIN_EXPANSIONS: [&str; 3] = [DELTA0, DELTA1, DELTA_R];

/// A map from lattice members to subsets of the carrier, tabulated over the
/// lattice it was built for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expansion {
    name: String,
    members: Vec<ElemSet>,
    image: Vec<ElemSet>,
}

/// Outcome of [`Expansion::validate`]; each field holds the first
/// counterexample found, if any.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ExpansionReport {
    pub name: String,
    /// A member whose image is not a hyperideal.
    pub value_outside_lattice: Option<ElemSet>,
    /// A member not contained in its image.
    pub not_inflationary: Option<ElemSet>,
    /// Members `I ⊆ J` with `δ(I) ⊄ δ(J)`.
    pub not_monotone: Option<(ElemSet, ElemSet)>,
}

impl ExpansionReport {
    pub fn passed(&self) -> bool {
        self.value_outside_lattice.is_none() && self.not_inflationary.is_none() && self.not_monotone.is_none()
    }
}

impl Expansion {
    pub(crate) fn from_fn(name: impl Into<String>, an: &Analysis, f: impl Fn(ElemSet) -> ElemSet) -> Self {
        let members = an.lattice().members().to_vec();
        let image = members.iter().map(|&i| f(i)).collect();
        Expansion {
            name: name.into(),
            members,
            image,
        }
    }

    /// The identity map.
    pub fn delta0(an: &Analysis) -> Self {
        Self::from_fn(DELTA0, an, |i| i)
    }

    /// The radical, as the intersection of the primes above each member.
    pub fn delta1(an: &Analysis) -> Self {
        Self::from_fn(DELTA1, an, |i| an.lattice().radical(i).expect("member"))
    }

    /// The constant map onto the carrier.
    pub fn delta_r(an: &Analysis) -> Self {
        let full = an.ring().carrier();
        Self::from_fn(DELTA_R, an, |_| full)
    }

    pub fn builtin(an: &Analysis, name: &str) -> Result<Self> {
        match name {
            DELTA0 => Ok(Self::delta0(an)),
            DELTA1 => Ok(Self::delta1(an)),
            DELTA_R => Ok(Self::delta_r(an)),
            _ => Err(Error::UnknownExpansion(name.to_string())),
        }
    }

    /// A user-supplied table, which must cover every lattice member exactly
    /// once. The result is not validated; see [`Expansion::validate`].
    pub fn from_table(name: impl Into<String>, an: &Analysis, table: &[(ElemSet, ElemSet)]) -> Result<Self> {
        let name = name.into();
        let members = an.lattice().members().to_vec();
        let mut image = vec![None; members.len()];
        for &(from, to) in table {
            let Some(k) = members.iter().position(|&i| i == from) else {
                return Err(Error::InvalidExpansion {
                    name,
                    detail: format!("{} is not a hyperideal", an.ring().show_set(from)),
                });
            };
            if image[k].replace(to).is_some_and(|prev| prev != to) {
                return Err(Error::InvalidExpansion {
                    name,
                    detail: format!("conflicting values for {}", an.ring().show_set(from)),
                });
            }
        }
        let image = image
            .into_iter()
            .zip(&members)
            .map(|(v, &i)| {
                v.ok_or_else(|| Error::InvalidExpansion {
                    name: name.clone(),
                    detail: format!("no value for {}", an.ring().show_set(i)),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Expansion { name, members, image })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// `δ(i)`, or `None` when `i` is not a lattice member.
    pub fn apply(&self, i: ElemSet) -> Option<ElemSet> {
        self.members.iter().position(|&x| x == i).map(|k| self.image[k])
    }

    /// `δ(i)` for a member; panics on anything else.
    pub fn at(&self, i: ElemSet) -> ElemSet {
        self.apply(i)
            .unwrap_or_else(|| panic!("{i:?} is not in the lattice of {}", self.name))
    }

    pub fn entries(&self) -> impl Iterator<Item = (ElemSet, ElemSet)> + '_ {
        self.members.iter().copied().zip(self.image.iter().copied())
    }

    /// Pointwise `gamma(delta(I))`.
    pub fn compose(gamma: &Expansion, delta: &Expansion) -> Result<Self> {
        if gamma.members != delta.members {
            return Err(Error::InvalidExpansion {
                name: format!("{}.{}", gamma.name, delta.name),
                detail: "expansions belong to different lattices".into(),
            });
        }
        let name = format!("{}.{}", gamma.name, delta.name);
        let image = delta
            .image
            .iter()
            .map(|&d| {
                gamma.apply(d).ok_or_else(|| Error::InvalidExpansion {
                    name: name.clone(),
                    detail: format!("{} maps outside the lattice", delta.name),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Expansion {
            name,
            members: delta.members.clone(),
            image,
        })
    }

    pub fn validate(&self) -> ExpansionReport {
        let mut report = ExpansionReport {
            name: self.name.clone(),
            ..Default::default()
        };
        report.value_outside_lattice = self.image.iter().copied().find(|v| !self.members.contains(v));
        report.not_inflationary = self.entries().find(|&(i, d)| !i.is_subset(d)).map(|(i, _)| i);
        'outer: for (i, di) in self.entries() {
            for (j, dj) in self.entries() {
                if i.is_subset(j) && !di.is_subset(dj) {
                    report.not_monotone = Some((i, j));
                    break 'outer;
                }
            }
        }
        report
    }

    /// Returns `self` if it passes [`Expansion::validate`].
    pub fn validated(self) -> Result<Self> {
        let r = self.validate();
        if r.passed() {
            Ok(self)
        } else {
            Err(Error::InvalidExpansion {
                name: self.name.clone(),
                detail: format!("{r:?}"),
            })
        }
    }

    /// Members `I, J` with `δ(I ∩ J) ≠ δ(I) ∩ δ(J)`.
    pub fn intersection_counterexample(&self) -> Option<(ElemSet, ElemSet)> {
        for (a, (i, di)) in self.entries().enumerate() {
            for (j, dj) in self.entries().skip(a) {
                if self.apply(i.intersection(j)) != Some(di.intersection(dj)) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn preserves_intersections(&self) -> bool {
        self.intersection_counterexample().is_none()
    }
}

/// The built-in expansions in a fixed order.
pub fn registry(an: &Analysis) -> Vec<Expansion> {
    vec![Expansion::delta0(an), Expansion::delta1(an), Expansion::delta_r(an)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::Hyperring;
    use crate::catalog::{builtin_r4, enumerate_structures, DEFAULT_SHAPES};
    use crate::limits::Limits;

    fn analyses() -> Vec<Analysis> {
        let mut out = vec![Analysis::new(Hyperring::new(builtin_r4()).unwrap()).unwrap()];
        for &(m, n) in &DEFAULT_SHAPES {
            for k in 1..=3 {
                for s in enumerate_structures(m, n, k, &Limits::default()).unwrap().structures {
                    out.push(Analysis::new(Hyperring::new(s).unwrap()).unwrap());
                }
            }
        }
        out
    }

    #[test]
    fn builtins_are_valid_everywhere() {
        for an in analyses() {
            for d in registry(&an) {
                assert!(d.validate().passed(), "{} on {}", d.name(), an.ring().name());
            }
        }
    }

    #[test]
    fn builtins_preserve_intersections() {
        for an in analyses() {
            for d in registry(&an) {
                assert!(d.preserves_intersections(), "{} on {}", d.name(), an.ring().name());
            }
        }
    }

    #[test]
    fn composition_laws() {
        for an in analyses() {
            let [d0, d1, dr] = <[Expansion; 3]>::try_from(registry(&an)).unwrap();
            for d in [&d0, &d1, &dr] {
                let c = Expansion::compose(&d0, d).unwrap();
                assert!(c.entries().eq(d.entries()));
                let c = Expansion::compose(&dr, d).unwrap();
                assert!(c.entries().eq(dr.entries()));
            }
            // The radical is idempotent; compared against the power form where
            // it is available.
            let c = Expansion::compose(&d1, &d1).unwrap();
            assert!(c.entries().eq(d1.entries()), "{}", an.ring().name());
            if an.ring().one().is_some() {
                for (i, r) in d1.entries() {
                    assert_eq!(an.radical_by_powers(i).unwrap(), r);
                }
            }
        }
    }

    #[test]
    fn mutated_table_is_caught() {
        let an = Analysis::new(Hyperring::new(builtin_r4()).unwrap()).unwrap();
        let mut table: Vec<(ElemSet, ElemSet)> = Expansion::delta0(&an).entries().collect();
        // send {0,1} to {0}
        table[1].1 = table[0].0;
        let bad = Expansion::from_table("bad", &an, &table).unwrap();
        let r = bad.validate();
        assert_eq!(r.not_inflationary, Some(table[1].0));
        assert!(bad.validated().is_err());
        table.pop();
        assert!(Expansion::from_table("short", &an, &table).is_err());
    }
}
