//! Fixed module batteries per catalog case, stored as JSON under
//! `data/batteries` and regenerated deterministically.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cohomology::resolve_trivial;
use crate::error::{Error, Result};
use crate::field_linalg::{Elem, Field, Matrix};
use crate::hopf::Algebra;
use crate::kernels::{CaseId, Kind};
use crate::modules::{hom_space, FDModule, ModuleFile};

/// Largest cyclic quotient kept in a battery.
pub const BATTERY_MAX_DIM: usize = 8;

const BATTERY_SEED: u64 = 0xba77e4;

/// Which algebra a battery lives over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BatteryTarget {
    Extended,
    O,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatteryFile {
    pub case: String,
    pub target: BatteryTarget,
    pub modules: Vec<ModuleFile>,
}

const STORED: &[(&str, &str)] = &[
    ("Ga:n=1,p=2,r=1", include_str!("../../data/batteries/Ga_n1_p2_r1.json")),
    ("Ga:n=1,p=3,r=1", include_str!("../../data/batteries/Ga_n1_p3_r1.json")),
    ("Heis3:p=3,r=1", include_str!("../../data/batteries/Heis3_p3_r1.json")),
];

/// File name used for a case in `data/batteries`.
pub fn battery_file_name(case: &CaseId) -> String {
    let s: String = case
        .to_string()
        .chars()
        .map(|c| match c {
            ':' | ',' => '_',
            '=' => '\0',
            c => c,
        })
        .filter(|&c| c != '\0')
        .collect();
    format!("{s}.json")
}

/// Down-closed sets of exponent vectors in the box `bounds`, of size at
/// most `max_size`, in a canonical order.
pub fn order_ideals(bounds: &[usize], max_size: usize) -> Vec<Vec<Vec<usize>>> {
    let zero = vec![0; bounds.len()];
    if bounds.iter().any(|&b| b == 0) || max_size == 0 {
        return Vec::new();
    }
    let mut seen: BTreeSet<Vec<Vec<usize>>> = BTreeSet::new();
    let mut frontier = vec![vec![zero]];
    while let Some(set) = frontier.pop() {
        if !seen.insert(set.clone()) || set.len() == max_size {
            continue;
        }
        for c in corners(&set, bounds) {
            let mut next = set.clone();
            next.push(c);
            next.sort();
            if !seen.contains(&next) {
                frontier.push(next);
            }
        }
    }
    let mut out: Vec<_> = seen.into_iter().collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// Exponent vectors outside `set` all of whose predecessors lie in it.
pub(crate) fn corners(set: &[Vec<usize>], bounds: &[usize]) -> Vec<Vec<usize>> {
    let mut out = BTreeSet::new();
    for e in set {
        for i in 0..bounds.len() {
            let mut c = e.clone();
            c[i] += 1;
            if c[i] >= bounds[i] || set.contains(&c) {
                continue;
            }
            let closed = (0..bounds.len()).all(|j| {
                if c[j] == 0 {
                    return true;
                }
                let mut d = c.clone();
                d[j] -= 1;
                set.contains(&d)
            });
            if closed {
                out.insert(c);
            }
        }
    }
    out.into_iter().collect()
}

/// The monomial module with basis `ideal`, where the generator at position
/// `vars[i]` shifts exponent `i` up by one and every other generator acts
/// by zero.
pub fn monomial_module(alg: &Algebra, field: &Field, vars: &[usize], ideal: &[Vec<usize>], name: &str) -> Result<FDModule> {
    let n = ideal.len();
    let ngens = alg.generators().len();
    let mut actions = vec![Matrix::zeros(field, n, n); ngens];
    for (i, &g) in vars.iter().enumerate() {
        if g >= ngens {
            return Err(Error::Shape(format!("generator position {g} out of range")));
        }
        for (col, e) in ideal.iter().enumerate() {
            let mut up = e.clone();
            up[i] += 1;
            if let Some(row) = ideal.iter().position(|x| *x == up) {
                actions[g].set(row, col, 1);
            }
        }
    }
    FDModule::new(name, alg.clone(), field, actions)
}

fn ideal_name(ideal: &[Vec<usize>]) -> String {
    let cells: Vec<String> = ideal
        .iter()
        .map(|e| e.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(""))
        .collect();
    format!("cyclic[{}]", cells.join(","))
}

/// A random extension `0 → m → E → k → 0`, the pushout of
/// `0 → Ω(k) → A → k → 0` along a random map `Ω(k) → m`.
pub fn random_extension(m: &FDModule, seed: u64) -> Result<FDModule> {
    let alg = m.algebra().clone();
    let f = m.field().clone();
    let res = resolve_trivial(&alg, 1)?;
    let omega = res.syzygy(1)?;
    let embed = res.syzygy_basis(1)?.to_vec();
    let homs = hom_space(&omega, m)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut phi = Matrix::zeros(&f, m.dim(), omega.dim());
    for h in &homs {
        phi.add_scaled(rng.gen_range(0..f.order()) as Elem, h);
    }
    let sum = FDModule::regular(&alg, &f)?.direct_sum(m)?;
    let graph: Vec<Vec<Elem>> = embed
        .iter()
        .enumerate()
        .map(|(i, w)| {
            let mut v = w.clone();
            v.extend(phi.column(i).into_iter().map(|c| f.neg(c)));
            v
        })
        .collect();
    Ok(sum.quotient(&graph)?.with_name(format!("ext(k, {})", m.name())))
}

/// Generates the battery of a case: cyclic quotients of dimension at most
/// [`BATTERY_MAX_DIM`] (including k), the regular module and one random
/// extension for G_a(1) over D̃; small B-quotients with trivial H action
/// for the Heisenberg group over O.
pub fn generate_battery(case: &CaseId) -> Result<(BatteryTarget, Vec<FDModule>)> {
    let bundle = crate::kernels::KernelBundle::build(*case)?;
    let p = case.p() as usize;
    let f = Field::new(case.p(), 1)?;
    match (case.group.kind, case.r) {
        (Kind::Additive(1), 1) => {
            let dt = Algebra::from(bundle.extended.clone());
            let mut mods = Vec::new();
            for ideal in order_ideals(&[p * p, p], BATTERY_MAX_DIM) {
                mods.push(monomial_module(&dt, &f, &[0, 1], &ideal, &ideal_name(&ideal))?);
            }
            if dt.dim() > BATTERY_MAX_DIM {
                mods.push(FDModule::regular(&dt, &f)?);
            }
            let line = mods
                .iter()
                .find(|m| m.dim() == 2)
                .cloned()
                .ok_or_else(|| Error::Missing("no 2-dimensional quotient".into()))?;
            mods.push(random_extension(&line, BATTERY_SEED)?);
            Ok((BatteryTarget::Extended, mods))
        }
        (Kind::Heisenberg3, 1) => {
            let o = Algebra::from(bundle.o.clone());
            let nb = bundle.o.b().generators().len();
            let vars: Vec<usize> = (0..nb).collect();
            let mut mods = Vec::new();
            for ideal in order_ideals(&vec![p; nb], 4) {
                mods.push(monomial_module(&o, &f, &vars, &ideal, &ideal_name(&ideal))?);
            }
            Ok((BatteryTarget::O, mods))
        }
        _ => Err(Error::Invalid(format!("no battery defined for {case}"))),
    }
}

pub fn battery_to_json(case: &CaseId, target: BatteryTarget, mods: &[FDModule]) -> Result<String> {
    let file = BatteryFile {
        case: case.to_string(),
        target,
        modules: mods.iter().map(|m| m.to_file()).collect(),
    };
    let value = serde_json::to_value(&file)?;
    Ok(serde_json::to_string_pretty(&value)? + "\n")
}

pub fn battery_from_json(s: &str, bundle: &crate::kernels::KernelBundle) -> Result<(BatteryTarget, Vec<FDModule>)> {
    let file: BatteryFile = serde_json::from_str(s)?;
    let alg = match file.target {
        BatteryTarget::Extended => Algebra::from(bundle.extended.clone()),
        BatteryTarget::O => Algebra::from(bundle.o.clone()),
    };
    let mods = file
        .modules
        .iter()
        .map(|m| FDModule::from_file(m, &alg))
        .collect::<Result<Vec<_>>>()?;
    Ok((file.target, mods))
}

/// The stored battery text for a case, if one ships with the crate.
pub fn stored_battery(case: &CaseId) -> Option<&'static str> {
    let id = case.to_string();
    STORED.iter().find(|(c, _)| *c == id).map(|(_, s)| *s)
}

/// The battery of a case: the stored copy when present, otherwise freshly
/// generated.
pub fn battery(bundle: &Arc<crate::kernels::KernelBundle>) -> Result<(BatteryTarget, Vec<FDModule>)> {
    match stored_battery(&bundle.case) {
        Some(s) => battery_from_json(s, bundle),
        None => generate_battery(&bundle.case),
    }
}
