use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{qstr, Q};

/// `c_k -> c_k + mu`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoRecursion {
    pub k: usize,
    #[serde(with = "qstr")]
    pub mu: Q,
}

/// `lambda_kp -> nu * lambda_kp`, with `kp >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoDilation {
    pub kp: usize,
    #[serde(with = "qstr")]
    pub nu: Q,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Perturbation {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub corec: Option<CoRecursion>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub codil: Option<CoDilation>,
}

/// One modified recurrence step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Level {
    Corec { k: usize, mu: Q },
    Codil { kp: usize, nu: Q },
}

impl Level {
    pub fn index(&self) -> usize {
        match self {
            Level::Corec { k, .. } => *k,
            Level::Codil { kp, .. } => *kp,
        }
    }

    fn as_perturbation(&self) -> Perturbation {
        match self {
            Level::Corec { k, mu } => Perturbation::corec(*k, mu.clone()),
            Level::Codil { kp, nu } => Perturbation::codil(*kp, nu.clone()),
        }
    }
}

impl Perturbation {
    pub fn none() -> Self {
        Perturbation::default()
    }

    pub fn corec(k: usize, mu: Q) -> Self {
        Perturbation {
            corec: Some(CoRecursion { k, mu }),
            codil: None,
        }
    }

    pub fn codil(kp: usize, nu: Q) -> Self {
        Perturbation {
            corec: None,
            codil: Some(CoDilation { kp, nu }),
        }
    }

    pub fn both(k: usize, mu: Q, kp: usize, nu: Q) -> Self {
        Perturbation {
            corec: Some(CoRecursion { k, mu }),
            codil: Some(CoDilation { kp, nu }),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(d) = &self.codil {
            if d.kp == 0 {
                return Err(Error::Input("co-dilation level must be at least 1".into()));
            }
            if !d.nu.is_positive() {
                return Err(Error::Input("co-dilation factor must be positive".into()));
            }
        }
        Ok(())
    }

    /// True when the perturbation leaves every coefficient unchanged.
    pub fn is_identity(&self) -> bool {
        self.corec.as_ref().is_none_or(|c| c.mu.is_zero())
            && self.codil.as_ref().is_none_or(|d| d.nu.is_one())
    }

    /// Shift added to `c_n`.
    pub fn mu_at(&self, n: usize) -> Option<&Q> {
        self.corec.as_ref().filter(|c| c.k == n).map(|c| &c.mu)
    }

    /// Factor applied to `lambda_n`.
    pub fn nu_at(&self, n: usize) -> Option<&Q> {
        self.codil.as_ref().filter(|d| d.kp == n).map(|d| &d.nu)
    }

    /// Modified steps in application order: by index, co-recursion first on ties.
    pub fn levels(&self) -> Vec<Level> {
        let mut out = Vec::new();
        if let Some(c) = &self.corec {
            out.push(Level::Corec {
                k: c.k,
                mu: c.mu.clone(),
            });
        }
        if let Some(d) = &self.codil {
            out.push(Level::Codil {
                kp: d.kp,
                nu: d.nu.clone(),
            });
        }
        out.sort_by_key(|l| (l.index(), matches!(l, Level::Codil { .. })));
        out
    }

    /// Highest modified index, 0 when unperturbed.
    pub fn top(&self) -> usize {
        self.levels().last().map_or(0, Level::index)
    }

    /// Perturbation made of the first `count` levels in application order.
    pub fn prefix(&self, count: usize) -> Perturbation {
        let mut out = Perturbation::none();
        for level in self.levels().into_iter().take(count) {
            let p = level.as_perturbation();
            out.corec = out.corec.or(p.corec);
            out.codil = out.codil.or(p.codil);
        }
        out
    }

    /// Same values with the two levels exchanged.
    pub fn flipped(&self) -> Result<Perturbation> {
        match (&self.corec, &self.codil) {
            (Some(c), Some(d)) => {
                let p = Perturbation::both(d.kp, c.mu.clone(), c.k, d.nu.clone());
                p.validate()?;
                Ok(p)
            }
            _ => Err(Error::Input("flipping needs both a co-recursion and a co-dilation".into())),
        }
    }
}
