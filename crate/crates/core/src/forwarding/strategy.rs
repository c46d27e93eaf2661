use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::fib::Fib;
use crate::name::ContentName;
use crate::packet::FaceId;
use crate::time::SimTime;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ForwardingStrategy {
    /// Best green face when one exists, otherwise every candidate face.
    SmartFlooding,
    /// One ranked face per attempt, advancing on timeout.
    BestRoute,
}

impl ForwardingStrategy {
    pub fn as_str(self) -> &'static str {
        match self {
            ForwardingStrategy::SmartFlooding => "smart-flooding",
            ForwardingStrategy::BestRoute => "best-route",
        }
    }
}

impl fmt::Display for ForwardingStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ForwardingStrategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "smart-flooding" | "smart_flooding" | "flooding" => Ok(ForwardingStrategy::SmartFlooding),
            "best-route" | "best_route" => Ok(ForwardingStrategy::BestRoute),
            other => Err(format!(
                "unknown strategy {other:?} (expected smart-flooding or best-route)"
            )),
        }
    }
}

/// Outcome of one forwarding decision.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Selection {
    pub faces: Vec<FaceId>,
    /// Metric of the face when exactly one green face was chosen; drives the
    /// PIT timer.
    pub green_metric: Option<SimTime>,
    /// The FIB offered no usable face, so every other link face was chosen.
    pub blind: bool,
}

impl Selection {
    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn is_flood(&self) -> bool {
        self.faces.len() >= 2
    }
}

/// Chooses upstream faces for `name`. `excluded` holds the faces the
/// interest arrived on; `link_faces` are all of the node's link faces.
pub fn select_faces(
    strategy: ForwardingStrategy,
    fib: &Fib,
    link_faces: &[FaceId],
    name: &ContentName,
    excluded: &BTreeSet<FaceId>,
    attempt: u32,
) -> Selection {
    let candidates: Vec<_> = fib
        .lookup(name)
        .iter()
        .filter(|f| !excluded.contains(&f.face) && !f.face.is_app())
        .collect();

    match strategy {
        ForwardingStrategy::BestRoute => match candidates.get(attempt as usize) {
            Some(record) => Selection {
                faces: vec![record.face],
                green_metric: record.is_green().then_some(record.metric),
                blind: false,
            },
            None => Selection::default(),
        },
        ForwardingStrategy::SmartFlooding => {
            if attempt == 0 {
                if let Some(green) = candidates.iter().find(|f| f.is_green()) {
                    return Selection {
                        faces: vec![green.face],
                        green_metric: Some(green.metric),
                        blind: false,
                    };
                }
            }
            let blind = candidates.is_empty();
            let faces: Vec<FaceId> = if blind {
                link_faces
                    .iter()
                    .copied()
                    .filter(|f| !excluded.contains(f) && !f.is_app())
                    .collect()
            } else {
                candidates.iter().map(|f| f.face).collect()
            };
            let green_metric = match faces.as_slice() {
                [only] => candidates
                    .iter()
                    .find(|f| f.face == *only && f.is_green())
                    .map(|f| f.metric),
                _ => None,
            };
            Selection {
                faces,
                green_metric,
                blind,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fib::FibConfig;
    use crate::name::parse_name;

    fn ms(v: u64) -> SimTime {
        SimTime::from_millis(v)
    }

    fn fib_with(faces: &[(usize, u64)]) -> Fib {
        let mut fib = Fib::new();
        let cfg = FibConfig::new(2, ms(4_800));
        for &(face, metric) in faces {
            fib.update_entry_face(&parse_name("/a/x").unwrap(), FaceId(face), ms(metric), ms(0), &cfg);
        }
        fib
    }

    fn links(n: usize) -> Vec<FaceId> {
        (1..=n).map(FaceId).collect()
    }

    #[test]
    fn best_route_walks_ranked_faces() {
        let fib = fib_with(&[(2, 10), (3, 20)]);
        let name = parse_name("/a/x").unwrap();
        let none = BTreeSet::new();
        let first = select_faces(ForwardingStrategy::BestRoute, &fib, &links(3), &name, &none, 0);
        assert_eq!(first.faces, vec![FaceId(2)]);
        assert_eq!(first.green_metric, Some(ms(10)));
        let second = select_faces(ForwardingStrategy::BestRoute, &fib, &links(3), &name, &none, 1);
        assert_eq!(second.faces, vec![FaceId(3)]);
        let third = select_faces(ForwardingStrategy::BestRoute, &fib, &links(3), &name, &none, 2);
        assert!(third.is_empty());
        let skip_in = BTreeSet::from([FaceId(2)]);
        let excl = select_faces(ForwardingStrategy::BestRoute, &fib, &links(3), &name, &skip_in, 0);
        assert_eq!(excl.faces, vec![FaceId(3)]);
    }

    #[test]
    fn smart_flooding_prefers_green() {
        let fib = fib_with(&[(1, 10), (2, 20)]);
        let name = parse_name("/a/x").unwrap();
        let sel = select_faces(ForwardingStrategy::SmartFlooding, &fib, &links(3), &name, &BTreeSet::new(), 0);
        assert_eq!(sel.faces, vec![FaceId(1)]);
        assert!(!sel.is_flood());
        let retry = select_faces(ForwardingStrategy::SmartFlooding, &fib, &links(3), &name, &BTreeSet::new(), 1);
        assert_eq!(retry.faces, vec![FaceId(1), FaceId(2)]);
        assert!(retry.is_flood());
        assert_eq!(retry.green_metric, None);
    }

    #[test]
    fn smart_flooding_broadcasts_without_fib_entry() {
        let fib = Fib::new();
        let name = parse_name("/a/x").unwrap();
        let sel = select_faces(
            ForwardingStrategy::SmartFlooding,
            &fib,
            &links(3),
            &name,
            &BTreeSet::from([FaceId(1)]),
            0,
        );
        assert_eq!(sel.faces, vec![FaceId(2), FaceId(3)]);
        assert!(sel.is_flood());
    }

    #[test]
    fn strategy_names_round_trip() {
        for s in [ForwardingStrategy::SmartFlooding, ForwardingStrategy::BestRoute] {
            assert_eq!(s.as_str().parse::<ForwardingStrategy>(), Ok(s));
        }
        assert!("random".parse::<ForwardingStrategy>().is_err());
    }
}
