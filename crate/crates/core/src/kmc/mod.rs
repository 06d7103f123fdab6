//! Continuous-time kinetic Monte Carlo of the lattice model.
//!
//! Every bond whose pair of sites allows a move sits in one of three index
//! sets (`•∗` at rate beta, `∗◦` at rate alpha, `•◦` at rate 1), so drawing
//! and applying an event costs O(1). Occupations are time-weighted between
//! events; currents are net species crossings counted per bond.

mod stats;
mod step;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::boundary::BoundaryRates;
use crate::error::{Error, Result};
use crate::hydro::{Densities, ModelParams};

pub use stats::{window_average, Estimate};
pub use step::{step_ensemble, step_initial_condition_run, StepEnsemble, StepProfile, StepRunConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Site {
    Bullet,
    Circ,
    Star,
}

impl Site {
    fn sample(rho: Densities, u: f64) -> Self {
        if u < rho.rho_circ {
            Self::Circ
        } else if u < rho.rho_circ + rho.rho_bullet {
            Self::Bullet
        } else {
            Self::Star
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Topology {
    Ring,
    Open,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitialFill {
    /// Ring: exact species counts `round(rho L)`, randomly placed.
    /// Open: independent sampling of every site.
    Uniform(Densities),
    Explicit(Vec<Site>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub length: usize,
    pub params: ModelParams,
    pub boundary: Option<BoundaryRates>,
    pub topology: Topology,
    pub t_burn: f64,
    pub t_measure: f64,
    pub seed: u64,
    pub initial_fill: InitialFill,
    pub blocks: usize,
}

impl SimConfig {
    /// Ring with the default burn-in `10 L` and measurement `100 L`.
    pub fn ring(length: usize, params: ModelParams, fill: Densities, seed: u64) -> Self {
        Self {
            length,
            params,
            boundary: None,
            topology: Topology::Ring,
            t_burn: 10.0 * length as f64,
            t_measure: 100.0 * length as f64,
            seed,
            initial_fill: InitialFill::Uniform(fill),
            blocks: 20,
        }
    }

    /// Open lattice, initially empty, with the default times.
    pub fn open(length: usize, params: ModelParams, rates: BoundaryRates, seed: u64) -> Self {
        Self {
            length,
            params,
            boundary: Some(rates),
            topology: Topology::Open,
            t_burn: 10.0 * length as f64,
            t_measure: 100.0 * length as f64,
            seed,
            initial_fill: InitialFill::Uniform(Densities::default()),
            blocks: 20,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        let min_length = if self.topology == Topology::Ring { 2 } else { 1 };
        if self.length < min_length {
            return Err(Error::Config(format!("length must be at least {min_length}")));
        }
        match (self.topology, &self.boundary) {
            (Topology::Ring, Some(_)) => return Err(Error::Config("a ring takes no boundary rates".into())),
            (Topology::Open, None) => return Err(Error::Config("an open lattice needs boundary rates".into())),
            (Topology::Open, Some(r)) => {
                for (name, v) in BoundaryRates::NAMES.iter().zip(r.as_array()) {
                    if !(v.is_finite() && v >= 0.0) {
                        return Err(Error::InvalidRates(format!("{name} must be non-negative, got {v}")));
                    }
                }
            }
            (Topology::Ring, None) => {}
        }
        if !(self.t_burn >= 0.0 && self.t_burn.is_finite()) {
            return Err(Error::Config(format!("t_burn must be non-negative, got {}", self.t_burn)));
        }
        if !(self.t_measure > 0.0 && self.t_measure.is_finite()) {
            return Err(Error::Config(format!("t_measure must be positive, got {}", self.t_measure)));
        }
        if self.blocks < 2 {
            return Err(Error::Config("at least two blocks are needed for error bars".into()));
        }
        match &self.initial_fill {
            InitialFill::Uniform(rho) => {
                rho.checked()?;
            }
            InitialFill::Explicit(sites) if sites.len() != self.length => {
                return Err(Error::Config(format!(
                    "explicit state has {} sites, length is {}",
                    sites.len(),
                    self.length
                )));
            }
            InitialFill::Explicit(_) => {}
        }
        Ok(())
    }
}

/// Reservoir moves available to a boundary site.
pub fn boundary_event_rates(state: Site, side: Side, rates: &BoundaryRates) -> Vec<(Site, f64)> {
    use Site::*;
    let moves = match (side, state) {
        (Side::Left, Circ) => vec![(Bullet, rates.nu_bullet_circ_l), (Star, rates.nu_star_circ_l)],
        (Side::Left, Star) => vec![(Bullet, rates.nu_bullet_star_l)],
        (Side::Left, Bullet) => vec![],
        (Side::Right, Bullet) => vec![(Star, rates.nu_bullet_star_r), (Circ, rates.nu_bullet_circ_r)],
        (Side::Right, Star) => vec![(Circ, rates.nu_star_circ_r)],
        (Side::Right, Circ) => vec![],
    };
    moves.into_iter().filter(|&(_, r)| r > 0.0).collect()
}

/// Net (circ, bullet) crossings, positive to the right, when a boundary site
/// changes from `from` to `to`.
fn boundary_crossings(side: Side, from: Site, to: Site) -> (i64, i64) {
    let count = |s: Site| ((s == Site::Circ) as i64, (s == Site::Bullet) as i64);
    let (c0, b0) = count(from);
    let (c1, b1) = count(to);
    match side {
        // particles gained at the first site came in from the left
        Side::Left => (c1 - c0, b1 - b0),
        // particles lost at the last site left to the right
        Side::Right => (c0 - c1, b0 - b1),
    }
}

const NO_CLASS: u8 = u8::MAX;
const ABSENT: usize = usize::MAX;

/// Move class of a bond, if any.
fn bond_class(left: Site, right: Site) -> u8 {
    match (left, right) {
        (Site::Bullet, Site::Star) => 0,
        (Site::Star, Site::Circ) => 1,
        (Site::Bullet, Site::Circ) => 2,
        _ => NO_CLASS,
    }
}

/// Measurement of one trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Measurement {
    pub length: usize,
    pub topology: Topology,
    pub seed: u64,
    pub total_time: f64,
    pub events: u64,
    pub profile_circ: Vec<f64>,
    pub profile_bullet: Vec<f64>,
    pub rho_site1: Densities,
    pub rho_site_l: Densities,
    /// Current per bond, averaged over the interior bonds.
    pub j_circ: Estimate,
    pub j_bullet: Estimate,
    /// Bond-resolved currents; bond `i` joins sites `i` and `i + 1`.
    pub bond_j_circ: Vec<Estimate>,
    pub bond_j_bullet: Vec<Estimate>,
    pub left_boundary: Option<BoundaryCurrents>,
    pub right_boundary: Option<BoundaryCurrents>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryCurrents {
    pub j_circ: Estimate,
    pub j_bullet: Estimate,
}

impl Measurement {
    /// Mean densities over the sites `from..to`.
    pub fn mean_density(&self, from: usize, to: usize) -> Densities {
        let n = (to - from) as f64;
        Densities::new(
            self.profile_circ[from..to].iter().sum::<f64>() / n,
            self.profile_bullet[from..to].iter().sum::<f64>() / n,
        )
    }
}

pub struct Simulator {
    params: ModelParams,
    rates: Option<BoundaryRates>,
    topology: Topology,
    sites: Vec<Site>,
    /// members of each move class, and each bond's class and slot
    class_members: [Vec<usize>; 3],
    class_of: Vec<u8>,
    slot_of: Vec<usize>,
    time: f64,
    rng: ChaCha8Rng,
    events: u64,
    recorder: Option<Recorder>,
}

struct Recorder {
    start: f64,
    block_len: f64,
    blocks: usize,
    last_change: Vec<f64>,
    occ_circ: Vec<f64>,
    occ_bullet: Vec<f64>,
    /// crossings per block and bond, `block * n_bonds + bond`
    bond_circ: Vec<i64>,
    bond_bullet: Vec<i64>,
    left: Vec<(i64, i64)>,
    right: Vec<(i64, i64)>,
    n_bonds: usize,
}

impl Recorder {
    fn block_of(&self, t: f64) -> usize {
        (((t - self.start) / self.block_len) as usize).min(self.blocks - 1)
    }

    fn touch(&mut self, site: usize, old: Site, t: f64) {
        let dt = t - self.last_change[site];
        match old {
            Site::Circ => self.occ_circ[site] += dt,
            Site::Bullet => self.occ_bullet[site] += dt,
            Site::Star => {}
        }
        self.last_change[site] = t;
    }
}

impl Simulator {
    pub fn new(cfg: &SimConfig) -> Result<Self> {
        cfg.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let sites = match &cfg.initial_fill {
            InitialFill::Explicit(sites) => sites.clone(),
            InitialFill::Uniform(rho) => match cfg.topology {
                Topology::Ring => {
                    let n_circ = (rho.rho_circ * cfg.length as f64).round() as usize;
                    let n_bullet = ((rho.rho_bullet * cfg.length as f64).round() as usize).min(cfg.length - n_circ);
                    let mut sites = vec![Site::Star; cfg.length];
                    sites[..n_circ].fill(Site::Circ);
                    sites[n_circ..n_circ + n_bullet].fill(Site::Bullet);
                    sites.shuffle(&mut rng);
                    sites
                }
                Topology::Open => (0..cfg.length).map(|_| Site::sample(*rho, rng.random())).collect(),
            },
        };
        Ok(Self::from_sites(sites, cfg.params, cfg.boundary, cfg.topology, rng))
    }

    fn from_sites(
        sites: Vec<Site>,
        params: ModelParams,
        rates: Option<BoundaryRates>,
        topology: Topology,
        rng: ChaCha8Rng,
    ) -> Self {
        let n_bonds = match topology {
            Topology::Ring => sites.len(),
            Topology::Open => sites.len() - 1,
        };
        let mut sim = Self {
            params,
            rates,
            topology,
            sites,
            class_members: [Vec::new(), Vec::new(), Vec::new()],
            class_of: vec![NO_CLASS; n_bonds],
            slot_of: vec![ABSENT; n_bonds],
            time: 0.0,
            rng,
            events: 0,
            recorder: None,
        };
        for bond in 0..n_bonds {
            sim.refresh(bond);
        }
        sim
    }

    pub fn sites(&self) -> &[Site] {
        &self.sites
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn events(&self) -> u64 {
        self.events
    }

    pub fn n_bonds(&self) -> usize {
        self.class_of.len()
    }

    fn right_of(&self, bond: usize) -> usize {
        if bond + 1 == self.sites.len() {
            0
        } else {
            bond + 1
        }
    }

    fn refresh(&mut self, bond: usize) {
        let class = bond_class(self.sites[bond], self.sites[self.right_of(bond)]);
        let old = self.class_of[bond];
        if old == class {
            return;
        }
        if old != NO_CLASS {
            let members = &mut self.class_members[old as usize];
            let slot = self.slot_of[bond];
            members.swap_remove(slot);
            if slot < members.len() {
                self.slot_of[members[slot]] = slot;
            }
        }
        if class != NO_CLASS {
            let members = &mut self.class_members[class as usize];
            self.slot_of[bond] = members.len();
            members.push(bond);
        } else {
            self.slot_of[bond] = ABSENT;
        }
        self.class_of[bond] = class;
    }

    /// Refreshes the bonds touching `site`.
    fn refresh_around(&mut self, site: usize) {
        let n_bonds = self.n_bonds();
        if site < n_bonds {
            self.refresh(site);
        }
        match self.topology {
            Topology::Ring => {
                let left = if site == 0 { n_bonds - 1 } else { site - 1 };
                self.refresh(left);
            }
            Topology::Open if site > 0 => self.refresh(site - 1),
            Topology::Open => {}
        }
    }

    fn class_rate(&self, class: usize) -> f64 {
        match class {
            0 => self.params.beta,
            1 => self.params.alpha,
            _ => 1.0,
        }
    }

    fn boundary_rate(&self, side: Side) -> f64 {
        match (self.topology, &self.rates) {
            (Topology::Open, Some(r)) => {
                let site = match side {
                    Side::Left => self.sites[0],
                    Side::Right => self.sites[self.sites.len() - 1],
                };
                boundary_event_rates(site, side, r).iter().map(|m| m.1).sum()
            }
            _ => 0.0,
        }
    }

    /// Sum of the rates of all enabled transitions, from the index sets.
    pub fn total_rate(&self) -> f64 {
        (0..3)
            .map(|c| self.class_rate(c) * self.class_members[c].len() as f64)
            .sum::<f64>()
            + self.boundary_rate(Side::Left)
            + self.boundary_rate(Side::Right)
    }

    /// Total rate recomputed by scanning every bond; must equal
    /// [`Simulator::total_rate`].
    pub fn total_rate_from_scan(&self) -> f64 {
        let bulk: f64 = (0..self.n_bonds())
            .map(|b| match bond_class(self.sites[b], self.sites[self.right_of(b)]) {
                NO_CLASS => 0.0,
                c => self.class_rate(c as usize),
            })
            .sum();
        bulk + self.boundary_rate(Side::Left) + self.boundary_rate(Side::Right)
    }

    fn set_site(&mut self, site: usize, new: Site, t: f64) {
        let old = self.sites[site];
        if let Some(rec) = self.recorder.as_mut() {
            rec.touch(site, old, t);
        }
        self.sites[site] = new;
    }

    /// Performs one event if it happens before `t_stop`; otherwise advances
    /// the clock to `t_stop` and returns false.
    pub fn step(&mut self, t_stop: f64) -> bool {
        let total = self.total_rate();
        if total <= 0.0 {
            self.time = t_stop;
            return false;
        }
        let u: f64 = self.rng.random();
        let t_next = self.time - (1.0 - u).ln() / total;
        if t_next > t_stop {
            self.time = t_stop;
            return false;
        }
        self.time = t_next;
        self.events += 1;

        let mut x = self.rng.random::<f64>() * total;
        for class in 0..3 {
            let class_total = self.class_rate(class) * self.class_members[class].len() as f64;
            if x < class_total {
                let members = &self.class_members[class];
                let bond = members[((x / class_total * members.len() as f64) as usize).min(members.len() - 1)];
                self.swap_bond(bond, t_next);
                return true;
            }
            x -= class_total;
        }
        for side in [Side::Left, Side::Right] {
            let rate = self.boundary_rate(side);
            if x < rate || (side == Side::Right && rate > 0.0) {
                self.boundary_move(side, x.min(rate), t_next);
                return true;
            }
            x -= rate;
        }
        // only reachable through rounding with no boundary moves enabled
        let class = (0..3).rev().find(|&c| !self.class_members[c].is_empty()).unwrap();
        let bond = *self.class_members[class].last().unwrap();
        self.swap_bond(bond, t_next);
        true
    }

    fn swap_bond(&mut self, bond: usize, t: f64) {
        let right = self.right_of(bond);
        let (a, b) = (self.sites[bond], self.sites[right]);
        self.set_site(bond, b, t);
        self.set_site(right, a, t);
        if let Some(rec) = self.recorder.as_mut() {
            let k = rec.block_of(t) * rec.n_bonds + bond;
            if a == Site::Bullet {
                rec.bond_bullet[k] += 1;
            }
            if b == Site::Circ {
                rec.bond_circ[k] -= 1;
            }
        }
        self.refresh_around(bond);
        self.refresh_around(right);
    }

    fn boundary_move(&mut self, side: Side, mut x: f64, t: f64) {
        let rates = self.rates.expect("boundary moves need rates");
        let site = match side {
            Side::Left => 0,
            Side::Right => self.sites.len() - 1,
        };
        let old = self.sites[site];
        let moves = boundary_event_rates(old, side, &rates);
        let mut new = moves.last().expect("enabled boundary move").0;
        for &(target, rate) in &moves {
            if x < rate {
                new = target;
                break;
            }
            x -= rate;
        }
        self.set_site(site, new, t);
        if let Some(rec) = self.recorder.as_mut() {
            let b = rec.block_of(t);
            let (dc, db) = boundary_crossings(side, old, new);
            let slot = match side {
                Side::Left => &mut rec.left[b],
                Side::Right => &mut rec.right[b],
            };
            slot.0 += dc;
            slot.1 += db;
        }
        self.refresh_around(site);
    }

    /// Runs until `t_end` without recording.
    pub fn advance(&mut self, t_end: f64) {
        while self.step(t_end) {}
    }

    /// Advances by `duration` while recording, then summarises.
    pub fn measure(&mut self, duration: f64, blocks: usize, seed: u64) -> Measurement {
        let l = self.sites.len();
        let n_bonds = self.n_bonds();
        let start = self.time;
        self.recorder = Some(Recorder {
            start,
            block_len: duration / blocks as f64,
            blocks,
            last_change: vec![start; l],
            occ_circ: vec![0.0; l],
            occ_bullet: vec![0.0; l],
            bond_circ: vec![0; blocks * n_bonds],
            bond_bullet: vec![0; blocks * n_bonds],
            left: vec![(0, 0); blocks],
            right: vec![(0, 0); blocks],
            n_bonds,
        });
        let events_before = self.events;
        let end = start + duration;
        self.advance(end);
        let mut rec = self.recorder.take().unwrap();
        for s in 0..l {
            rec.touch(s, self.sites[s], end);
        }

        let block_len = rec.block_len;
        let per_block = |counts: &[i64], bond: usize| -> Vec<f64> {
            (0..blocks).map(|b| counts[b * n_bonds + bond] as f64 / block_len).collect()
        };
        let bond_j_circ: Vec<Estimate> = (0..n_bonds).map(|b| Estimate::from_blocks(&per_block(&rec.bond_circ, b))).collect();
        let bond_j_bullet: Vec<Estimate> =
            (0..n_bonds).map(|b| Estimate::from_blocks(&per_block(&rec.bond_bullet, b))).collect();
        let averaged = |counts: &[i64]| -> Estimate {
            let blocks_mean: Vec<f64> = (0..blocks)
                .map(|b| counts[b * n_bonds..(b + 1) * n_bonds].iter().sum::<i64>() as f64 / (block_len * n_bonds as f64))
                .collect();
            Estimate::from_blocks(&blocks_mean)
        };
        let (j_circ, j_bullet) = if n_bonds > 0 {
            (averaged(&rec.bond_circ), averaged(&rec.bond_bullet))
        } else {
            (Estimate::default(), Estimate::default())
        };
        let boundary = |counts: &[(i64, i64)]| BoundaryCurrents {
            j_circ: Estimate::from_blocks(&counts.iter().map(|c| c.0 as f64 / block_len).collect::<Vec<_>>()),
            j_bullet: Estimate::from_blocks(&counts.iter().map(|c| c.1 as f64 / block_len).collect::<Vec<_>>()),
        };
        let open = self.topology == Topology::Open;
        let profile_circ: Vec<f64> = rec.occ_circ.iter().map(|o| o / duration).collect();
        let profile_bullet: Vec<f64> = rec.occ_bullet.iter().map(|o| o / duration).collect();
        Measurement {
            length: l,
            topology: self.topology,
            seed,
            total_time: duration,
            events: self.events - events_before,
            rho_site1: Densities::new(profile_circ[0], profile_bullet[0]),
            rho_site_l: Densities::new(profile_circ[l - 1], profile_bullet[l - 1]),
            profile_circ,
            profile_bullet,
            j_circ,
            j_bullet,
            bond_j_circ,
            bond_j_bullet,
            left_boundary: open.then(|| boundary(&rec.left)),
            right_boundary: open.then(|| boundary(&rec.right)),
        }
    }
}

/// Burn-in followed by a measurement window.
pub fn run(cfg: &SimConfig) -> Result<Measurement> {
    let mut sim = Simulator::new(cfg)?;
    sim.advance(cfg.t_burn);
    Ok(sim.measure(cfg.t_measure, cfg.blocks, cfg.seed))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p89() -> ModelParams {
        ModelParams::new(0.8, 0.9).unwrap()
    }

    fn short_ring(fill: Densities, seed: u64) -> SimConfig {
        SimConfig {
            t_burn: 20.0,
            t_measure: 200.0,
            ..SimConfig::ring(200, p89(), fill, seed)
        }
    }

    #[test]
    fn boundary_move_table() {
        let r = BoundaryRates {
            nu_bullet_star_l: 0.1,
            nu_star_circ_l: 0.2,
            nu_bullet_circ_l: 0.3,
            nu_bullet_star_r: 0.4,
            nu_star_circ_r: 0.5,
            nu_bullet_circ_r: 0.6,
        };
        assert_eq!(boundary_event_rates(Site::Star, Side::Left, &r), vec![(Site::Bullet, 0.1)]);
        assert!(boundary_event_rates(Site::Bullet, Side::Left, &r).is_empty());
        assert_eq!(
            boundary_event_rates(Site::Circ, Side::Left, &r),
            vec![(Site::Bullet, 0.3), (Site::Star, 0.2)]
        );
        assert_eq!(
            boundary_event_rates(Site::Bullet, Side::Right, &r),
            vec![(Site::Star, 0.4), (Site::Circ, 0.6)]
        );
        assert_eq!(boundary_event_rates(Site::Star, Side::Right, &r), vec![(Site::Circ, 0.5)]);
        assert!(boundary_event_rates(Site::Circ, Side::Right, &r).is_empty());
    }

    #[test]
    fn boundary_crossing_signs() {
        // a circle leaving through the left end carries negative circle current
        assert_eq!(boundary_crossings(Side::Left, Site::Circ, Site::Star), (-1, 0));
        assert_eq!(boundary_crossings(Side::Left, Site::Circ, Site::Bullet), (-1, 1));
        assert_eq!(boundary_crossings(Side::Right, Site::Bullet, Site::Circ), (-1, 1));
        assert_eq!(boundary_crossings(Side::Right, Site::Star, Site::Circ), (-1, 0));
    }

    #[test]
    fn empty_ring_is_frozen() {
        let m = run(&short_ring(Densities::new(0.0, 0.0), 1)).unwrap();
        assert_eq!(m.events, 0);
        assert_eq!(m.j_circ.mean, 0.0);
        assert_eq!(m.j_bullet.mean, 0.0);
        assert!(m.profile_circ.iter().all(|&r| r == 0.0));
    }

    #[test]
    fn identical_seeds_reproduce() {
        let cfg = short_ring(Densities::new(0.3, 0.4), 7);
        assert_eq!(run(&cfg).unwrap(), run(&cfg).unwrap());
        let other = run(&SimConfig { seed: 8, ..cfg.clone() }).unwrap();
        assert_ne!(run(&cfg).unwrap(), other);
    }

    #[test]
    fn ring_conserves_species_and_rates_stay_consistent() {
        let cfg = short_ring(Densities::new(0.3, 0.4), 3);
        let mut sim = Simulator::new(&cfg).unwrap();
        let count = |s: &Simulator, k: Site| s.sites().iter().filter(|&&x| x == k).count();
        let (c0, b0) = (count(&sim, Site::Circ), count(&sim, Site::Bullet));
        assert_eq!((c0, b0), (60, 80));
        for _ in 0..20_000 {
            sim.step(f64::INFINITY);
            assert!((sim.total_rate() - sim.total_rate_from_scan()).abs() < 1e-9);
        }
        assert_eq!((count(&sim, Site::Circ), count(&sim, Site::Bullet)), (c0, b0));
    }

    #[test]
    fn open_lattice_rates_stay_consistent() {
        let cfg = SimConfig::open(30, p89(), BoundaryRates::uniform(0.5), 11);
        let mut sim = Simulator::new(&cfg).unwrap();
        for _ in 0..20_000 {
            sim.step(f64::INFINITY);
            assert!((sim.total_rate() - sim.total_rate_from_scan()).abs() < 1e-9);
        }
    }

    #[test]
    fn profile_is_time_weighted_and_conserving() {
        let m = run(&short_ring(Densities::new(0.3, 0.4), 5)).unwrap();
        let total_circ: f64 = m.profile_circ.iter().sum();
        let total_bullet: f64 = m.profile_bullet.iter().sum();
        assert!((total_circ - 60.0).abs() < 1e-6);
        assert!((total_bullet - 80.0).abs() < 1e-6);
        assert!(m.j_circ.mean < 0.0 && m.j_bullet.mean > 0.0);
    }

    #[test]
    fn config_errors() {
        let mut cfg = short_ring(Densities::new(0.3, 0.4), 1);
        cfg.boundary = Some(BoundaryRates::uniform(0.5));
        assert!(Simulator::new(&cfg).is_err());
        let mut cfg = SimConfig::open(10, p89(), BoundaryRates::uniform(0.5), 1);
        cfg.boundary = None;
        assert!(Simulator::new(&cfg).is_err());
        let mut cfg = short_ring(Densities::new(0.3, 0.4), 1);
        cfg.initial_fill = InitialFill::Explicit(vec![Site::Star; 3]);
        assert!(Simulator::new(&cfg).is_err());
    }

    #[test]
    fn silent_species_has_no_boundary_current() {
        // no circle moves at either end and no circles inside
        let rates = BoundaryRates {
            nu_star_circ_l: 0.0,
            nu_bullet_circ_l: 0.0,
            nu_star_circ_r: 0.0,
            nu_bullet_circ_r: 0.0,
            ..BoundaryRates::uniform(0.5)
        };
        let cfg = SimConfig {
            t_burn: 50.0,
            t_measure: 500.0,
            ..SimConfig::open(40, p89(), rates, 2)
        };
        let m = run(&cfg).unwrap();
        assert_eq!(m.left_boundary.unwrap().j_circ.mean, 0.0);
        assert_eq!(m.right_boundary.unwrap().j_circ.mean, 0.0);
        assert!(m.left_boundary.unwrap().j_bullet.mean > 0.0);
    }
}
