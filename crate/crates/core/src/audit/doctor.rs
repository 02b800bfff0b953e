//! Sensitivity of "count the doctors in a coin-flip subsample" under two
//! couplings of the coins.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Record {
    pub name: &'static str,
    pub profession: &'static str,
}

const fn rec(name: &'static str, profession: &'static str) -> Record {
    Record { name, profession }
}

/// Doctors among the records whose coin is heads.
fn sampled_doctors(d: &[Record], coins: &[bool]) -> i64 {
    d.iter().zip(coins).filter(|(r, &c)| c && r.profession == "Doctor").count() as i64
}

/// How a coin string for the first dataset maps to one for the second.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Coupling {
    /// Position `j` gets the same coin in both datasets.
    Identity,
    /// Record `j` of the first dataset shares its coin with record
    /// `map[j]` of the second.
    Aligned(Vec<usize>),
}

impl Coupling {
    /// Shared records keep their coin; the differing records are paired with
    /// each other.
    pub fn aligned(d1: &[Record], d2: &[Record]) -> Coupling {
        let mut used = vec![false; d2.len()];
        let mut map = vec![usize::MAX; d1.len()];
        for (j, r) in d1.iter().enumerate() {
            if let Some(k) = d2.iter().enumerate().position(|(k, s)| !used[k] && s == r) {
                used[k] = true;
                map[j] = k;
            }
        }
        let mut spare = (0..d2.len()).filter(|&k| !used[k]);
        for m in map.iter_mut().filter(|m| **m == usize::MAX) {
            *m = spare.next().expect("datasets have equal size");
        }
        Coupling::Aligned(map)
    }

    fn apply(&self, coins: &[bool]) -> Vec<bool> {
        match self {
            Coupling::Identity => coins.to_vec(),
            Coupling::Aligned(map) => {
                let mut out = vec![false; coins.len()];
                for (j, &k) in map.iter().enumerate() {
                    out[k] = coins[j];
                }
                out
            }
        }
    }
}

/// Largest `|A(D₁; R) − A(D₂; C(R))|` over all coin strings `R`.
pub fn max_count_difference(d1: &[Record], d2: &[Record], coupling: &Coupling) -> i64 {
    assert_eq!(d1.len(), d2.len());
    let k = d1.len();
    (0..1u64 << k)
        .map(|bits| {
            let coins: Vec<bool> = (0..k).map(|j| bits >> j & 1 == 1).collect();
            (sampled_doctors(d1, &coins) - sampled_doctors(d2, &coupling.apply(&coins))).abs()
        })
        .max()
        .unwrap_or(0)
}

#[derive(Debug, Clone, Serialize)]
pub struct DoctorReport {
    /// Gap at coins include, exclude, include under the identity coupling.
    pub identity_at_iei: i64,
    pub identity_max: i64,
    pub aligned_max: i64,
    pub pass: bool,
}

pub const D1: [Record; 3] = [rec("Al", "Doctor"), rec("Ben", "Mechanic"), rec("Cal", "Doctor")];
pub const D2: [Record; 3] = [rec("Ben", "Mechanic"), rec("Cal", "Doctor"), rec("Dan", "Professor")];

/// The three-record example: identity coupling shows a gap of 2, the
/// aligned coupling never more than 1.
pub fn doctor_example() -> DoctorReport {
    let iei = [true, false, true];
    let identity_at_iei = (sampled_doctors(&D1, &iei) - sampled_doctors(&D2, &iei)).abs();
    let identity_max = max_count_difference(&D1, &D2, &Coupling::Identity);
    let aligned_max = max_count_difference(&D1, &D2, &Coupling::aligned(&D1, &D2));
    DoctorReport {
        identity_at_iei,
        identity_max,
        aligned_max,
        pass: identity_at_iei == 2 && aligned_max <= 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_values() {
        let r = doctor_example();
        assert_eq!(r.identity_at_iei, 2);
        assert_eq!(r.aligned_max, 1);
        assert!(r.pass);
    }

    #[test]
    fn aligned_map_pairs_the_odd_records() {
        assert_eq!(Coupling::aligned(&D1, &D2), Coupling::Aligned(vec![2, 0, 1]));
    }

    #[test]
    fn equal_datasets_never_differ() {
        assert_eq!(max_count_difference(&D1, &D1, &Coupling::Identity), 0);
        assert_eq!(max_count_difference(&D1, &D1, &Coupling::aligned(&D1, &D1)), 0);
    }

    #[test]
    fn alternating_rename_grows_with_n_under_identity() {
        // Doctors at even positions; the first record moves to the end.
        let names = ["a", "b", "c", "d", "e", "f", "g", "h"];
        let d1: Vec<Record> = names
            .iter()
            .enumerate()
            .map(|(j, n)| rec(n, if j % 2 == 0 { "Doctor" } else { "Clerk" }))
            .collect();
        let mut d2 = d1[1..].to_vec();
        d2.push(rec("z", "Doctor"));
        assert_eq!(max_count_difference(&d1, &d2, &Coupling::Identity), 4);
        assert_eq!(max_count_difference(&d1, &d2, &Coupling::aligned(&d1, &d2)), 0);
    }
}
