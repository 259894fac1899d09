//! The automata used as reference points: the Černý series, the ternary
//! automaton with reset length 95, the greedy worst cases G1-G4, the aperiodic
//! series and Kari's automaton with its Kari-like extension.
//!
//! Figures number states from 1; every table here is 0-based.

use std::fmt;
use std::str::FromStr;

use crate::automaton::Automaton;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Fixture {
    Cerny,
    Fig1,
    G1,
    G2,
    G3,
    G4,
    Aperiodic3,
    Kari,
    KariPrime,
}

impl Fixture {
    pub const ALL: [Fixture; 9] = [
        Fixture::Cerny,
        Fixture::Fig1,
        Fixture::G1,
        Fixture::G2,
        Fixture::G3,
        Fixture::G4,
        Fixture::Aperiodic3,
        Fixture::Kari,
        Fixture::KariPrime,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Fixture::Cerny => "cerny",
            Fixture::Fig1 => "fig1",
            Fixture::G1 => "g1",
            Fixture::G2 => "g2",
            Fixture::G3 => "g3",
            Fixture::G4 => "g4",
            Fixture::Aperiodic3 => "aperiodic3",
            Fixture::Kari => "kari",
            Fixture::KariPrime => "kari_prime",
        }
    }

    /// Series take a size parameter; the others are single automata.
    pub fn is_series(self) -> bool {
        matches!(self, Fixture::Cerny | Fixture::Aperiodic3)
    }
}

impl fmt::Display for Fixture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Fixture {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Fixture::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::UnknownFixture(s.to_string()))
    }
}

fn table(n: usize, rows: &[&[usize]]) -> Automaton {
    Automaton::new(n, rows.iter().map(|r| r.to_vec()).collect()).expect("fixture table is valid")
}

/// Builds a fixture. `n` is required for the series and ignored otherwise.
pub fn fixture(which: Fixture, n: Option<usize>) -> Result<Automaton> {
    if which.is_series() {
        let n = n.ok_or_else(|| {
            Error::InvalidParameter(format!("fixture `{which}` needs a size n"))
        })?;
        if !(2..=64).contains(&n) {
            return Err(Error::InvalidParameter(format!(
                "fixture `{which}` needs 2 <= n <= 64, got {n}"
            )));
        }
        return Ok(match which {
            Fixture::Cerny => cerny(n),
            _ => aperiodic3(n),
        });
    }
    Ok(match which {
        Fixture::Fig1 => table(
            12,
            &[
                &[0, 2, 1, 4, 3, 6, 5, 8, 7, 10, 9, 11],
                &[1, 0, 7, 7, 5, 4, 6, 3, 9, 8, 11, 10],
                &[0, 1, 3, 2, 4, 5, 6, 7, 8, 9, 10, 11],
            ],
        ),
        Fixture::G1 => table(5, &[&[2, 1, 2, 3, 4], &[3, 1, 3, 0, 4], &[1, 0, 2, 4, 3]]),
        Fixture::G2 => table(
            6,
            &[&[2, 1, 2, 3, 4, 5], &[3, 1, 3, 0, 5, 4], &[1, 0, 2, 4, 3, 5]],
        ),
        Fixture::G3 => table(
            6,
            &[&[1, 0, 2, 4, 3, 5], &[3, 4, 2, 4, 1, 5], &[0, 2, 3, 2, 5, 4]],
        ),
        Fixture::G4 => table(
            6,
            &[&[3, 1, 2, 3, 4, 5], &[4, 2, 1, 4, 0, 5], &[1, 0, 2, 3, 5, 4]],
        ),
        Fixture::Kari => table(6, &[&[1, 2, 0, 4, 5, 3], &[0, 1, 5, 3, 2, 2]]),
        Fixture::KariPrime => table(
            9,
            &[
                &[1, 2, 0, 4, 5, 3, 6, 7, 8],
                &[0, 1, 5, 3, 2, 2, 7, 8, 6],
                &[1, 2, 0, 4, 5, 3, 7, 6, 8],
            ],
        ),
        Fixture::Cerny | Fixture::Aperiodic3 => unreachable!(),
    })
}

/// Looks a fixture up by name.
pub fn fixture_by_name(name: &str, n: Option<usize>) -> Result<Automaton> {
    fixture(name.parse()?, n)
}

/// `C_n`: `a` is the cycle `q -> q+1`, `b` sends 0 to 1 and fixes the rest.
fn cerny(n: usize) -> Automaton {
    let a = (0..n).map(|q| (q + 1) % n).collect();
    let mut b: Vec<usize> = (0..n).collect();
    b[0] = 1;
    Automaton::new(n, vec![a, b]).unwrap()
}

/// The ternary aperiodic series: `a` walks up and `b` walks down the path
/// `0..n-2`, and `c` sends `n/2 - 1` to the extra state `n - 1`.
fn aperiodic3(n: usize) -> Automaton {
    let mut a: Vec<usize> = (0..n).collect();
    let mut b = a.clone();
    let mut c = a.clone();
    for i in 0..n.saturating_sub(2) {
        a[i] = i + 1;
    }
    for i in 1..n.saturating_sub(1) {
        b[i] = i - 1;
    }
    c[n / 2 - 1] = n - 1;
    Automaton::new(n, vec![a, b, c]).unwrap()
}
