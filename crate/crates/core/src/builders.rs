//! Deterministic fixture suites: builtin quantales × small groups × every
//! valid structure, with hom-sets computed on demand.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::quantale::Quantale;
use crate::vgroup::{enumerate_homs, enumerate_structures, VGroup, VHom};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SuiteLevel {
    Smoke,
    Full,
}

impl FromStr for SuiteLevel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "smoke" => Ok(SuiteLevel::Smoke),
            "full" => Ok(SuiteLevel::Full),
            other => Err(Error::Structural(format!("unknown suite level `{other}`"))),
        }
    }
}

impl fmt::Display for SuiteLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SuiteLevel::Smoke => "smoke",
            SuiteLevel::Full => "full",
        })
    }
}

/// One generated object with the indices of its quantale and group.
#[derive(Debug, Clone)]
pub struct SuiteObject {
    pub quantale: usize,
    pub group: usize,
    pub object: Arc<VGroup>,
}

/// All morphisms between two suite objects, or a truncation marker when
/// the enumeration guard was hit.
#[derive(Debug, Clone)]
pub struct HomSet {
    pub dom: usize,
    pub cod: usize,
    pub homs: Vec<VHom>,
    pub truncated: bool,
}

#[derive(Debug, Clone)]
pub struct Suite {
    pub level: SuiteLevel,
    pub quantales: Vec<Arc<Quantale>>,
    pub groups: Vec<FiniteGroup>,
    pub objects: Vec<SuiteObject>,
}

/// Groups of the smoke suite. The trivial group is included so that the
/// zero object takes part in every quantification.
pub fn smoke_groups() -> Vec<FiniteGroup> {
    (1..=4).map(FiniteGroup::cyclic).collect()
}

pub fn full_groups() -> Vec<FiniteGroup> {
    let mut g: Vec<FiniteGroup> = (1..=6).map(FiniteGroup::cyclic).collect();
    g.push(FiniteGroup::klein());
    g.push(FiniteGroup::symmetric3());
    g
}

pub fn standard_suite(level: SuiteLevel) -> Result<Suite> {
    let mut quantales = vec![Quantale::boolean(), Quantale::lawvere_chain(2)?];
    let groups = match level {
        SuiteLevel::Smoke => smoke_groups(),
        SuiteLevel::Full => {
            quantales.push(Quantale::ultrametric_chain(3)?);
            quantales.push(Quantale::lawvere_chain(3)?);
            full_groups()
        }
    };
    let mut objects = Vec::new();
    for (qi, q) in quantales.iter().enumerate() {
        for (gi, g) in groups.iter().enumerate() {
            for object in enumerate_structures(g, q)? {
                objects.push(SuiteObject { quantale: qi, group: gi, object: Arc::new(object) });
            }
        }
    }
    Ok(Suite { level, quantales, groups, objects })
}

impl Suite {
    /// Objects over quantale `qi`, as indices into `objects`.
    pub fn objects_over(&self, qi: usize) -> Vec<usize> {
        (0..self.objects.len()).filter(|&i| self.objects[i].quantale == qi).collect()
    }

    pub fn count(&self, qi: usize, gi: usize) -> usize {
        self.objects.iter().filter(|o| o.quantale == qi && o.group == gi).count()
    }

    /// The hom-set between objects `i` and `j`; empty with `truncated` set
    /// when it is too large to enumerate.
    pub fn hom_set(&self, i: usize, j: usize) -> Result<HomSet> {
        let (g, h) = (&self.objects[i], &self.objects[j]);
        if g.quantale != h.quantale {
            return Err(Error::QuantaleMismatch);
        }
        match enumerate_homs(&g.object, &h.object) {
            Ok(homs) => Ok(HomSet { dom: i, cod: j, homs, truncated: false }),
            Err(Error::Capacity { .. }) => Ok(HomSet { dom: i, cod: j, homs: Vec::new(), truncated: true }),
            Err(e) => Err(e),
        }
    }

    /// Every hom-set between objects over the same quantale, in
    /// `(dom, cod)` order.
    pub fn hom_sets(&self) -> Result<Vec<HomSet>> {
        let mut out = Vec::new();
        for qi in 0..self.quantales.len() {
            let objs = self.objects_over(qi);
            for &i in &objs {
                for &j in &objs {
                    out.push(self.hom_set(i, j)?);
                }
            }
        }
        Ok(out)
    }

    /// Every enumerated morphism over quantales satisfying `keep`.
    pub fn morphisms(&self, keep: impl Fn(&Quantale) -> bool) -> Result<Vec<VHom>> {
        let mut out = Vec::new();
        for qi in 0..self.quantales.len() {
            if !keep(&self.quantales[qi]) {
                continue;
            }
            let objs = self.objects_over(qi);
            for &i in &objs {
                for &j in &objs {
                    out.extend(self.hom_set(i, j)?.homs);
                }
            }
        }
        Ok(out)
    }
}
