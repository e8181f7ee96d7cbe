//! Simulated record of repeated box openings: each step the atom decays
//! (cat dead) or not (cat alive), and the walk position `x` moves down or up
//! by one.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::decision_tree::Action;

/// Atom not decayed (alive) or decayed (dead).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CatState {
    Phi1Alive,
    Phi2Dead,
}

impl CatState {
    pub fn is_alive(self) -> bool {
        self == CatState::Phi1Alive
    }

    pub fn label(self) -> &'static str {
        match self {
            CatState::Phi1Alive => "alive",
            CatState::Phi2Dead => "dead",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MeasurementRecord {
    /// 1-based.
    pub k: usize,
    pub state: CatState,
    /// Walk position after this step.
    pub x: i64,
    /// Stake of this step, `|x_k − x_{k−1}|`.
    pub v: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CatHistory {
    records: Vec<MeasurementRecord>,
    alive: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnvConfig {
    pub n: usize,
    pub decay_probability: f64,
    pub seed: u64,
}

impl Default for EnvConfig {
    fn default() -> Self {
        EnvConfig {
            n: 10_000,
            decay_probability: 0.5,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum EnvError {
    #[error("n must be at least 1")]
    Empty,
    #[error("decay probability {0} is outside [0, 1]")]
    Probability(f64),
}

impl EnvConfig {
    pub fn validate(&self) -> Result<(), EnvError> {
        if self.n == 0 {
            return Err(EnvError::Empty);
        }
        if !(0.0..=1.0).contains(&self.decay_probability) {
            return Err(EnvError::Probability(self.decay_probability));
        }
        Ok(())
    }
}

pub fn step_value(x_prev: i64, x_next: i64) -> u64 {
    x_next.abs_diff(x_prev)
}

/// `+v` when the belief matches the cat, `−v` otherwise.
pub fn reward(action: Action, state: CatState, v: f64) -> f64 {
    if action.believes_alive() == state.is_alive() {
        v
    } else {
        -v
    }
}

/// Runs the walk with ChaCha8 seeded from `cfg.seed`; one uniform draw per
/// step.
pub fn generate_history(cfg: &EnvConfig) -> Result<CatHistory, EnvError> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let decays: Vec<bool> = (0..cfg.n)
        .map(|_| rng.gen_bool(cfg.decay_probability))
        .collect();
    Ok(CatHistory::from_decays(&decays))
}

impl CatHistory {
    /// Builds the walk from an explicit sequence of decay outcomes.
    pub fn from_decays(decays: &[bool]) -> Self {
        let mut x = 0i64;
        let records = decays
            .iter()
            .enumerate()
            .map(|(i, &decayed)| {
                let next = if decayed { x - 1 } else { x + 1 };
                let rec = MeasurementRecord {
                    k: i + 1,
                    state: if decayed {
                        CatState::Phi2Dead
                    } else {
                        CatState::Phi1Alive
                    },
                    x: next,
                    v: step_value(x, next),
                };
                x = next;
                rec
            })
            .collect();
        CatHistory::from_records(records)
    }

    /// Wraps already validated records.
    pub fn from_records(records: Vec<MeasurementRecord>) -> Self {
        let alive = records.iter().filter(|r| r.state.is_alive()).count();
        CatHistory { records, alive }
    }

    pub fn records(&self) -> &[MeasurementRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn alive_count(&self) -> usize {
        self.alive
    }

    pub fn dead_count(&self) -> usize {
        self.records.len() - self.alive
    }

    /// `(ω1, ω2)`: fractions of alive and dead records.
    pub fn frequencies(&self) -> (f64, f64) {
        empirical_frequencies(self)
    }

    pub fn omega(&self, state: CatState) -> f64 {
        let (o1, o2) = self.frequencies();
        if state.is_alive() {
            o1
        } else {
            o2
        }
    }
}

pub fn empirical_frequencies(h: &CatHistory) -> (f64, f64) {
    let n = h.len() as f64;
    (h.alive_count() as f64 / n, h.dead_count() as f64 / n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use CatState::*;

    #[test]
    fn fixed_draws() {
        let h = CatHistory::from_decays(&[false, true, true, false]);
        let xs: Vec<_> = h.records().iter().map(|r| r.x).collect();
        let states: Vec<_> = h.records().iter().map(|r| r.state).collect();
        let vs: Vec<_> = h.records().iter().map(|r| r.v).collect();
        assert_eq!(xs, [1, 0, -1, 0]);
        assert_eq!(states, [Phi1Alive, Phi2Dead, Phi2Dead, Phi1Alive]);
        assert_eq!(vs, [1, 1, 1, 1]);
        assert_eq!(empirical_frequencies(&h), (0.5, 0.5));
    }

    #[test]
    fn never_decays() {
        let h = generate_history(&EnvConfig {
            n: 50,
            decay_probability: 0.0,
            seed: 9,
        })
        .unwrap();
        for r in h.records() {
            assert_eq!(r.state, Phi1Alive);
            assert_eq!(r.x, r.k as i64);
        }
        assert_eq!(h.frequencies(), (1.0, 0.0));
    }

    #[test]
    fn same_seed_same_history() {
        let cfg = EnvConfig {
            n: 1000,
            decay_probability: 0.5,
            seed: 42,
        };
        assert_eq!(
            generate_history(&cfg).unwrap(),
            generate_history(&cfg).unwrap()
        );
        let other = EnvConfig { seed: 43, ..cfg };
        assert_ne!(
            generate_history(&cfg).unwrap(),
            generate_history(&other).unwrap()
        );
    }

    #[test]
    fn balanced_frequencies_concentrate() {
        for seed in 0..20 {
            let h = generate_history(&EnvConfig {
                n: 10_000,
                decay_probability: 0.5,
                seed,
            })
            .unwrap();
            let (o1, o2) = h.frequencies();
            assert!((0.47..=0.53).contains(&o1), "seed {seed}: {o1}");
            assert_eq!(o1 + o2, 1.0);
        }
    }

    #[test]
    fn step_values() {
        assert_eq!(step_value(0, 1), 1);
        assert_eq!(step_value(3, 2), 1);
        assert_eq!(step_value(5, 5), 0);
    }

    #[test]
    fn rewards() {
        assert_eq!(reward(Action::A2BelieveDead, Phi1Alive, 1.0), -1.0);
        assert_eq!(reward(Action::A2BelieveDead, Phi2Dead, 1.0), 1.0);
        assert_eq!(reward(Action::A1BelieveAlive, Phi1Alive, 0.0), 0.0);
        assert_eq!(reward(Action::A1BelieveAlive, Phi2Dead, 2.0), -2.0);
    }

    #[test]
    fn invalid_configs() {
        let bad = EnvConfig {
            n: 0,
            ..Default::default()
        };
        assert_eq!(generate_history(&bad).unwrap_err(), EnvError::Empty);
        let bad = EnvConfig {
            decay_probability: 1.5,
            ..Default::default()
        };
        assert!(matches!(bad.validate(), Err(EnvError::Probability(_))));
    }
}
