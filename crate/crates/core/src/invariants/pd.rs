//! Planar diagram codes and signed Gauss codes.
//!
//! PD layout: one `[a, b, c, d]` record per crossing, arc labels listed
//! counterclockwise starting from the incoming under-strand. The under-strand
//! runs `a → c`. The over-strand runs `d → b` at a positive crossing and
//! `b → d` at a negative one.
//!
//! A signed Gauss code lists, per component, the crossings met in traversal
//! order with an over/under flag, plus the oriented sign of every crossing.
//! Sign convention: positive when the over-strand direction rotated
//! counterclockwise by less than π meets the under-strand direction, i.e.
//! `cross(d_over, d_under) > 0`. The braid letter `σ_i` (left strand over
//! right, strands running upward) is a positive crossing.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::braid::Sign;
use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PdCode {
    pub crossings: Vec<[u32; 4]>,
}

/// Slot positions inside a crossing record, tracked during orientation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Slot {
    crossing: usize,
    index: usize,
}

impl PdCode {
    pub fn new(crossings: Vec<[u32; 4]>) -> Result<Self> {
        let pd = PdCode { crossings };
        pd.validate()?;
        Ok(pd)
    }

    pub fn len(&self) -> usize {
        self.crossings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.crossings.is_empty()
    }

    fn occurrences(&self) -> HashMap<u32, Vec<Slot>> {
        let mut occ: HashMap<u32, Vec<Slot>> = HashMap::new();
        for (crossing, rec) in self.crossings.iter().enumerate() {
            for (index, &label) in rec.iter().enumerate() {
                occ.entry(label).or_default().push(Slot { crossing, index });
            }
        }
        occ
    }

    pub fn validate(&self) -> Result<()> {
        for (label, slots) in self.occurrences() {
            if slots.len() != 2 {
                return Err(Error::Parse(format!(
                    "PD label {label} appears {} times, expected 2",
                    slots.len()
                )));
            }
        }
        Ok(())
    }

    pub fn arc_count(&self) -> usize {
        self.occurrences().len()
    }

    /// Number of link components (strands joined straight through crossings).
    pub fn component_count(&self) -> usize {
        if self.crossings.is_empty() {
            return 1;
        }
        let occ = self.occurrences();
        let mut index: HashMap<u32, usize> = HashMap::new();
        for &l in occ.keys() {
            let n = index.len();
            index.insert(l, n);
        }
        let mut parent: Vec<usize> = (0..index.len()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for rec in &self.crossings {
            for (u, v) in [(rec[0], rec[2]), (rec[1], rec[3])] {
                let (a, b) = (find(&mut parent, index[&u]), find(&mut parent, index[&v]));
                parent[a] = b;
            }
        }
        (0..parent.len()).filter(|&i| find(&mut parent, i) == i).count()
    }

    /// Oriented sign of every crossing, recovered by propagating strand
    /// directions from the under-strands through the diagram.
    pub fn crossing_signs(&self) -> Result<Vec<Sign>> {
        self.validate()?;
        let occ = self.occurrences();
        let n = self.crossings.len();
        // incoming[c][i]: whether the arc at slot i enters crossing c
        let mut incoming: Vec<[Option<bool>; 4]> = vec![[Some(true), None, Some(false), None]; n];
        let mut queue: Vec<Slot> = (0..n)
            .flat_map(|c| [Slot { crossing: c, index: 0 }, Slot { crossing: c, index: 2 }])
            .collect();
        loop {
            while let Some(s) = queue.pop() {
                let dir = incoming[s.crossing][s.index].expect("queued slots are oriented");
                let label = self.crossings[s.crossing][s.index];
                // the other end of the same arc has the opposite direction
                let other = occ[&label].iter().copied().find(|o| *o != s).unwrap_or(s);
                let mut implied = vec![(other, !dir)];
                if s.index % 2 == 1 {
                    // the two over slots of a crossing are one strand
                    implied.push((Slot { crossing: s.crossing, index: 4 - s.index }, !dir));
                }
                for (slot, d) in implied {
                    match incoming[slot.crossing][slot.index] {
                        None => {
                            incoming[slot.crossing][slot.index] = Some(d);
                            queue.push(slot);
                        }
                        Some(existing) if existing != d => {
                            return Err(Error::Parse("inconsistent strand orientation in PD code".into()));
                        }
                        Some(_) => {}
                    }
                }
            }
            // a component that only passes over: orient it along increasing labels
            let Some(c) = (0..n).find(|&c| incoming[c][1].is_none()) else { break };
            let [_, b, _, d] = self.crossings[c];
            let d_enters = d.wrapping_add(1) == b || (b.wrapping_add(1) != d && d > b);
            incoming[c][3] = Some(d_enters);
            queue.push(Slot { crossing: c, index: 3 });
        }
        Ok(incoming
            .iter()
            .map(|slots| if slots[3] == Some(true) { Sign::Positive } else { Sign::Negative })
            .collect())
    }

    pub fn writhe(&self) -> Result<i64> {
        Ok(self.crossing_signs()?.iter().map(|s| s.as_i64()).sum())
    }

    /// Switch every crossing.
    pub fn mirror(&self) -> Result<PdCode> {
        let signs = self.crossing_signs()?;
        let crossings = self
            .crossings
            .iter()
            .zip(signs)
            .map(|(&[a, b, c, d], s)| match s {
                // over-strand d → b becomes the under-strand
                Sign::Positive => [d, a, b, c],
                Sign::Negative => [b, c, d, a],
            })
            .collect();
        Ok(PdCode { crossings })
    }

    pub fn relabel(&self, f: impl Fn(u32) -> u32) -> PdCode {
        PdCode { crossings: self.crossings.iter().map(|r| r.map(&f)).collect() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaussVisit {
    pub crossing: usize,
    pub over: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignedGauss {
    pub components: Vec<Vec<GaussVisit>>,
    pub signs: Vec<Sign>,
}

impl SignedGauss {
    pub fn crossing_count(&self) -> usize {
        self.signs.len()
    }

    pub fn writhe(&self) -> i64 {
        self.signs.iter().map(|s| s.as_i64()).sum()
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = vec![(0usize, 0usize); self.signs.len()];
        for comp in &self.components {
            for v in comp {
                let slot = seen
                    .get_mut(v.crossing)
                    .ok_or_else(|| Error::Parse(format!("visit to unknown crossing {}", v.crossing)))?;
                if v.over {
                    slot.0 += 1;
                } else {
                    slot.1 += 1;
                }
            }
        }
        if let Some(i) = seen.iter().position(|&s| s != (1, 1)) {
            return Err(Error::Parse(format!("crossing {i} must be visited once over and once under")));
        }
        Ok(())
    }

    pub fn mirror(&self) -> SignedGauss {
        SignedGauss {
            components: self
                .components
                .iter()
                .map(|c| c.iter().map(|v| GaussVisit { crossing: v.crossing, over: !v.over }).collect())
                .collect(),
            signs: self.signs.iter().map(|s| s.flip()).collect(),
        }
    }

    /// Components rotated to their lexicographically least starting point and
    /// sorted, with the signs: equal for codes that differ only in where each
    /// component starts and in component order.
    pub fn canonical(&self) -> (Vec<Vec<(usize, bool)>>, Vec<Sign>) {
        let mut comps: Vec<Vec<(usize, bool)>> = self
            .components
            .iter()
            .map(|c| {
                let seq: Vec<(usize, bool)> = c.iter().map(|v| (v.crossing, v.over)).collect();
                (0..seq.len().max(1))
                    .map(|r| {
                        let mut s = seq.clone();
                        s.rotate_left(r.min(seq.len().saturating_sub(1)));
                        s
                    })
                    .min()
                    .unwrap_or_default()
            })
            .collect();
        comps.sort();
        (comps, self.signs.clone())
    }

    /// PD code with arcs labelled 1, 2, … in traversal order.
    pub fn to_pd(&self) -> Result<PdCode> {
        self.validate()?;
        let n = self.signs.len();
        let mut under: Vec<(u32, u32)> = vec![(0, 0); n];
        let mut over: Vec<(u32, u32)> = vec![(0, 0); n];
        let mut next_label = 1u32;
        for comp in &self.components {
            if comp.is_empty() {
                continue;
            }
            let first = next_label;
            let m = comp.len() as u32;
            for (k, v) in comp.iter().enumerate() {
                let out = first + k as u32;
                let inc = if k == 0 { first + m - 1 } else { out - 1 };
                if v.over {
                    over[v.crossing] = (inc, out);
                } else {
                    under[v.crossing] = (inc, out);
                }
            }
            next_label += m;
        }
        let crossings = (0..n)
            .map(|c| {
                let (ui, uo) = under[c];
                let (oi, oo) = over[c];
                match self.signs[c] {
                    Sign::Positive => [ui, oo, uo, oi],
                    Sign::Negative => [ui, oi, uo, oo],
                }
            })
            .collect();
        Ok(PdCode { crossings })
    }
}
