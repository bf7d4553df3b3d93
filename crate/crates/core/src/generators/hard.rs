//! Unsatisfiable XOR systems from layered expanders: the graph constraints,
//! zero constraints on layer 0 and a single one-constraint on the top
//! layer.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::bipartite::{random_right_regular, BipartiteGraph, ExpansionMode, ExpansionVerdict};
use super::layered::{build_layered, check_layered_expansion, LayeredGraph};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::xorcsp::{XorConstraint, XorSystem};

/// Expansion requirements and retry policy for [`hard_instance`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HardParams {
    pub alpha: Rational,
    pub gamma: Rational,
    pub mode: ExpansionMode,
    pub max_attempts: usize,
}

impl Default for HardParams {
    fn default() -> Self {
        HardParams {
            alpha: Rational::new(3, 2),
            gamma: Rational::new(1, 4),
            mode: ExpansionMode::default(),
            max_attempts: 50,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HardInstance {
    pub d: usize,
    pub ell: usize,
    pub m: usize,
    pub seed: u64,
    /// Full system including `({x_ℓ}, 1)`.
    pub system: XorSystem,
    pub x_ell: u32,
    pub base: BipartiteGraph,
    pub layered: LayeredGraph,
    pub attempts: usize,
    pub verdict: ExpansionVerdict,
    /// False when no attempt passed the expansion check ("unverified
    /// expansion"); the last attempt is returned.
    pub verified: bool,
}

impl HardInstance {
    /// The system without `({x_ℓ}, 1)`; the game from `x_ℓ ↦ 1` is played
    /// on it.
    pub fn without_top(&self) -> XorSystem {
        let mut s = XorSystem::with_names(self.system.variable_names().to_vec())
            .expect("names already validated");
        let top = XorConstraint::new([self.x_ell], true);
        for c in self.system.constraints().filter(|c| **c != top) {
            s.add(c.clone()).expect("same variables");
        }
        s
    }
}

fn assemble(layered: &LayeredGraph, x_ell: u32) -> XorSystem {
    let mut s = XorSystem::with_names(layered.variable_names()).expect("generated names are valid");
    let g = layered.graph();
    for w in 0..g.right_size() {
        s.add(XorConstraint::new(g.neighbors(w).iter().copied(), false))
            .expect("neighbors are variables");
    }
    for x in layered.layer(0) {
        s.add(XorConstraint::new([x], false)).expect("layer vertices are variables");
    }
    s.add(XorConstraint::new([x_ell], true)).expect("top vertex is a variable");
    s
}

/// Draws random `d`-right-regular base graphs on `m + m` vertices, stacks
/// `ℓ` copies and retries until the layered graph passes the single-
/// neighbor expansion check. The top variable is `v_{ℓ,0}`.
pub fn hard_instance(d: usize, ell: usize, m: usize, seed: u64, params: &HardParams) -> Result<HardInstance> {
    if d == 0 || ell == 0 {
        return Err(Error::InvalidArgument("d and ell must be positive".into()));
    }
    if m < 4 * d {
        return Err(Error::InvalidArgument(format!("need m >= 4d, got m = {m}, d = {d}")));
    }
    if params.max_attempts == 0 {
        return Err(Error::InvalidArgument("at least one attempt is needed".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x_ell = (ell * m) as u32;
    let mut last = None;
    for attempt in 1..=params.max_attempts {
        let base = random_right_regular(m, d, rng.gen())?;
        let layered = build_layered(&base, ell)?;
        let verdict = check_layered_expansion(&layered, params.alpha, params.gamma, params.mode)?;
        let verified = verdict.single_neighbor;
        last = Some((base, layered, verdict, attempt));
        if verified {
            break;
        }
    }
    let (base, layered, verdict, attempts) = last.expect("at least one attempt");
    Ok(HardInstance {
        d,
        ell,
        m,
        seed,
        system: assemble(&layered, x_ell),
        x_ell,
        verified: verdict.single_neighbor,
        base,
        layered,
        attempts,
        verdict,
    })
}

/// Adds variables that occur in no constraint until there are `target_n`.
pub fn dummy_pad(s: &XorSystem, target_n: usize) -> Result<XorSystem> {
    if target_n < s.num_variables() {
        return Err(Error::InvalidArgument(format!(
            "cannot shrink {} variables to {target_n}",
            s.num_variables()
        )));
    }
    let mut out = s.clone();
    let mut i = 0;
    while out.num_variables() < target_n {
        let name = format!("pad{i}");
        i += 1;
        if out.variable_index(&name).is_none() {
            out.add_variable(name)?;
        }
    }
    Ok(out)
}
