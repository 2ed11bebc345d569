//! Seeded randomized verification of the exact identities.

use std::time::Instant;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cfrac::{homography_chain_residuals, spectral_residual_for};
use crate::error::{Error, Result};
use crate::oprl::{comparison_polys, coprl_structural, corrected_relation_residual, mobius_residual, predicted_discrepancy, reduce_to_oprl, MobiusParams};
use crate::perturbation::Perturbation;
use crate::recurrence::Recurrence;
use crate::scalar::{gauss, q, GaussQ, Q};
use crate::scheme::{CoefficientScheme, SchemeForm, Seq};
use crate::transfer::{structural_residual_at, transfer_residual};

/// Longest coefficient table a random scheme carries.
pub const TABLE_LEN: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Structural,
    Transfer,
    Spectral,
    Oprl,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Structural, Suite::Transfer, Suite::Spectral, Suite::Oprl];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Structural => "structural",
            Suite::Transfer => "transfer",
            Suite::Spectral => "spectral",
            Suite::Oprl => "oprl",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Input(format!("unknown suite {s:?}")))
    }

    /// Instance count used when none is requested.
    pub fn default_count(self) -> usize {
        match self {
            Suite::Spectral => 25,
            _ => 100,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub instances: usize,
    /// Individual scalar identities evaluated.
    pub checks: usize,
    pub failures: Vec<String>,
    pub rows: Vec<InstanceRow>,
    #[serde(skip)]
    pub elapsed_ms: u128,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn index(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.gen_range(lo..=hi)
    }

    pub fn rational(&mut self) -> Q {
        q(self.int(-9, 9), self.int(1, 9))
    }

    pub fn nonzero(&mut self) -> Q {
        loop {
            let v = self.rational();
            if !v.is_zero() {
                return v;
            }
        }
    }

    pub fn positive(&mut self) -> Q {
        q(self.int(1, 9), self.int(1, 9))
    }

    /// Random tabulated scheme; general nodes are real or a conjugate pair.
    pub fn scheme(&mut self, form: SchemeForm) -> CoefficientScheme {
        let rho = Seq::Table((0..TABLE_LEN).map(|_| self.nonzero()).collect());
        let c = Seq::Table((0..TABLE_LEN).map(|_| self.rational()).collect());
        let lambda = Seq::Table((0..TABLE_LEN).map(|_| self.positive()).collect());
        match form {
            SchemeForm::Oprl => CoefficientScheme::oprl(rho, c, lambda),
            SchemeForm::Special => CoefficientScheme::special(rho, c, lambda, self.nonzero()).expect("nonzero omega"),
            SchemeForm::General => {
                let (mut a, mut b) = (Vec::new(), Vec::new());
                for _ in 0..TABLE_LEN {
                    let re = self.rational();
                    if self.index(0, 1) == 0 {
                        let im = self.nonzero();
                        a.push(gauss(re.clone(), im.clone()));
                        b.push(gauss(re, -im));
                    } else {
                        a.push(gauss(re, Q::zero()));
                        b.push(gauss(self.rational(), Q::zero()));
                    }
                }
                CoefficientScheme::general(rho, c, lambda, Seq::Table(a), Seq::Table(b))
            }
        }
    }

    /// `0 <= k <= kp <= n`, `kp >= 1`, with random `mu` and positive `nu`.
    pub fn perturbation(&mut self, n: usize) -> Perturbation {
        let kp = self.index(1, n.max(1));
        let k = self.index(0, kp);
        Perturbation::both(k, self.rational(), kp, self.positive())
    }

    pub fn gauss(&mut self) -> GaussQ {
        gauss(self.rational(), self.rational())
    }
}

/// Per-instance tally: exact residuals that were nonzero and checks that raised errors.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct InstanceRow {
    pub instance: usize,
    pub checks: usize,
    pub nonzero: usize,
    pub errors: usize,
}

#[derive(Default)]
struct Tally {
    rows: Vec<InstanceRow>,
    failures: Vec<String>,
}

impl Tally {
    fn row(&mut self, instance: usize) -> &mut InstanceRow {
        if self.rows.last().map(|r| r.instance) != Some(instance) {
            self.rows.push(InstanceRow {
                instance,
                ..InstanceRow::default()
            });
        }
        self.rows.last_mut().expect("row pushed")
    }

    fn record(&mut self, instance: usize, checks: usize, label: String, ok: Result<bool>) {
        let row = self.row(instance);
        row.checks += checks;
        match ok {
            Ok(true) => {}
            Ok(false) => {
                row.nonzero += 1;
                self.failures.push(format!("{label}: nonzero residual"));
            }
            Err(e) => {
                row.errors += 1;
                self.failures.push(format!("{label}: {e}"));
            }
        }
    }

    fn fail(&mut self, instance: usize, message: String) {
        self.row(instance).errors += 1;
        self.failures.push(message);
    }
}

fn structural(seed: u64, count: usize) -> Tally {
    let mut s = Sampler::new(seed);
    let mut t = Tally::default();
    for i in 0..count {
        let scheme = s.scheme(form_for(i));
        let n = s.index(1, 12);
        let pert = s.perturbation(n);
        let z = s.rational();
        let label = format!("instance {i} (n={n}, {pert:?}, z={z})");
        t.record(
            i,
            2,
            label,
            structural_residual_at(&scheme, &pert, n, &z).map(|(a, b)| a.is_zero() && b.is_zero()),
        );
    }
    t
}

/// Cycles through the three scheme forms.
fn form_for(i: usize) -> SchemeForm {
    [SchemeForm::General, SchemeForm::Special, SchemeForm::Oprl][i % 3]
}

fn transfer(seed: u64, count: usize) -> Tally {
    let mut s = Sampler::new(seed);
    let mut t = Tally::default();
    for i in 0..count {
        let scheme = s.scheme(form_for(i));
        let n = s.index(1, 12);
        let pert = s.perturbation(n);
        let z = s.rational();
        let label = format!("instance {i} (n={n}, {pert:?}, z={z})");
        t.record(i, 4, label, transfer_residual(&Recurrence::at(&scheme, z), &pert, n).map(|m| m.is_zero()));
    }
    t
}

/// Points per spectral instance.
pub const SPECTRAL_POINTS: usize = 20;

fn spectral(seed: u64, count: usize) -> Tally {
    let mut s = Sampler::new(seed);
    let mut t = Tally::default();
    for i in 0..count {
        let scheme = s.scheme(form_for(i));
        let top = s.index(1, 6);
        let pert = s.perturbation(top);
        let depth = pert.top() + s.index(2, 4);
        let mut evaluated = 0;
        let mut attempts = 0;
        while evaluated < SPECTRAL_POINTS && attempts < 50 * SPECTRAL_POINTS {
            attempts += 1;
            let z = s.gauss();
            let single = spectral_residual_for(&scheme, &pert, &z, depth);
            let chain = homography_chain_residuals(&scheme, &pert, &z, depth);
            match (single, chain) {
                (Err(Error::Pole { .. }), _) | (_, Err(Error::Pole { .. })) => continue,
                (a, b) => {
                    evaluated += 1;
                    let label = format!("instance {i} ({pert:?}, depth {depth}, z={z})");
                    t.record(
                        i,
                        4,
                        label,
                        a.and_then(|a| b.map(|b| a.is_zero() && b.iter().all(Zero::is_zero))),
                    );
                }
            }
        }
        if evaluated < SPECTRAL_POINTS {
            t.fail(i, format!("instance {i}: only {evaluated} pole-free points"));
        }
    }
    t
}

fn oprl(seed: u64, count: usize) -> Tally {
    let mut s = Sampler::new(seed);
    let mut t = Tally::default();
    let mut i = 0;
    let mut attempts = 0;
    while i < count && attempts < 20 * count {
        attempts += 1;
        let a = s.rational();
        let c = Seq::Table((0..TABLE_LEN).map(|_| s.rational()).collect());
        let rho = Seq::Table((0..TABLE_LEN).map(|_| s.nonzero()).collect());
        let lambda = Seq::Table((0..TABLE_LEN).map(|_| s.positive()).collect());
        let node = Seq::Constant(gauss(a.clone(), Q::zero()));
        let scheme = CoefficientScheme::general(rho, c, lambda, node.clone(), node);
        let gamma = s.nonzero();
        let params = MobiusParams {
            alpha: &gamma * &a,
            beta: s.rational(),
            gamma,
            delta: s.rational(),
            a,
        };
        if params.validate().is_err() {
            continue;
        }
        let reduced = match reduce_to_oprl(&scheme, &params, 14) {
            Ok(r) => r,
            Err(Error::SingularReduction { .. }) => continue,
            Err(e) => {
                t.fail(i, format!("instance {i}: {e}"));
                i += 1;
                continue;
            }
        };
        let n = s.index(2, 12);
        let x = s.rational();
        let k = s.index(1, n - 1);
        let (mu, nu) = (s.rational(), s.positive());
        let label = format!("instance {i} (n={n}, k={k}, mu={mu}, nu={nu}, x={x})");
        let gx = &params.gamma * &x + &params.delta;
        if !gx.is_zero() {
            t.record(i, 1, format!("{label} mobius"), mobius_residual(&scheme, &params, &reduced, n, &x).map(|r| r.is_zero()));
        }
        let pert = s.perturbation(n);
        let (kk, kp) = (pert.corec.as_ref().unwrap().k, pert.codil.as_ref().unwrap().kp);
        t.record(
            i,
            1,
            format!("{label} coprl"),
            coprl_structural(&reduced, kk, kp, mu.clone(), nu.clone(), n, &x).map(|(p, q)| p.is_zero() && q.is_zero()),
        );
        t.record(
            i,
            1,
            format!("{label} corrected"),
            corrected_relation_residual(&reduced, k, &mu, &nu, n).map(|r| r.is_zero()),
        );
        t.record(
            i,
            1,
            format!("{label} discrepancy"),
            comparison_polys(&reduced, k, &mu, &nu)
                .and_then(|c| predicted_discrepancy(&reduced, k, &mu, &nu).map(|p| c.discrepancy == p && c.corrected == c.direct)),
        );
        i += 1;
    }
    if i < count {
        t.failures.push(format!("only {i} of {count} reductions were constructible"));
    }
    t
}

/// Runs `count` random instances of a suite from a fixed seed.
pub fn run_suite(suite: Suite, seed: u64, count: usize) -> SuiteReport {
    let start = Instant::now();
    let t = match suite {
        Suite::Structural => structural(seed, count),
        Suite::Transfer => transfer(seed, count),
        Suite::Spectral => spectral(seed, count),
        Suite::Oprl => oprl(seed, count),
    };
    SuiteReport {
        suite,
        seed,
        instances: count,
        checks: t.rows.iter().map(|r| r.checks).sum(),
        failures: t.failures,
        rows: t.rows,
        elapsed_ms: start.elapsed().as_millis(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suites_pass() {
        for suite in Suite::ALL {
            let r = run_suite(suite, 3, 6);
            assert!(r.passed(), "{:?}", r.failures);
        }
    }

    #[test]
    fn sampler_is_deterministic() {
        let mut a = Sampler::new(11);
        let mut b = Sampler::new(11);
        assert_eq!(a.perturbation(9), b.perturbation(9));
        assert_eq!(Suite::parse("oprl").unwrap(), Suite::Oprl);
    }
}
