//! Heavy-edge rating and contraction partner selection.

use rand::Rng;

use super::dynamic::DynamicHypergraph;
use crate::error::{Error, Result};
use crate::hypergraph::{VertexId, Weight};

/// `sum over shared hyperedges e of w(e) / (|e| - 1)`.
pub fn rate_pair(hg: &DynamicHypergraph, u: VertexId, v: VertexId) -> Result<f64> {
    for x in [u, v] {
        if !hg.is_active(x) {
            return Err(Error::InactiveVertex(x));
        }
    }
    if u == v {
        return Err(Error::SelfContraction(u));
    }
    Ok(hg
        .incident_edges(u)
        .iter()
        .filter(|&&e| hg.pins(e).contains(&v))
        .map(|&e| hg.edge_weight(e) as f64 / (hg.pins(e).len() - 1) as f64)
        .sum())
}

/// Scratch space for repeated partner selection.
#[derive(Debug)]
pub struct PartnerSelector {
    score: Vec<f64>,
    touched: Vec<VertexId>,
}

impl PartnerSelector {
    pub fn new(vertex_count: usize) -> Self {
        Self {
            score: vec![0.0; vertex_count],
            touched: Vec::new(),
        }
    }

    /// Highest-rated neighbour `v` of `u` with `c(u) + c(v) <= max_node_weight`,
    /// ties broken uniformly at random.
    pub fn select<R: Rng + ?Sized>(
        &mut self,
        hg: &DynamicHypergraph,
        u: VertexId,
        max_node_weight: Weight,
        rng: &mut R,
    ) -> Option<VertexId> {
        for &e in hg.incident_edges(u) {
            let pins = hg.pins(e);
            if pins.len() < 2 {
                continue;
            }
            let r = hg.edge_weight(e) as f64 / (pins.len() - 1) as f64;
            for &v in pins {
                if v == u {
                    continue;
                }
                if self.score[v as usize] == 0.0 {
                    self.touched.push(v);
                }
                self.score[v as usize] += r;
            }
        }
        let cu = hg.vertex_weight(u);
        let mut best: Option<VertexId> = None;
        let mut best_score = f64::NEG_INFINITY;
        let mut ties = 0u32;
        for &v in &self.touched {
            let s = self.score[v as usize];
            if cu + hg.vertex_weight(v) > max_node_weight {
                continue;
            }
            if s > best_score {
                best_score = s;
                best = Some(v);
                ties = 1;
            } else if s == best_score {
                ties += 1;
                if rng.gen_range(0..ties) == 0 {
                    best = Some(v);
                }
            }
        }
        for &v in &self.touched {
            self.score[v as usize] = 0.0;
        }
        self.touched.clear();
        best
    }
}

/// One-off partner selection; see [`PartnerSelector::select`].
pub fn select_contraction_partner<R: Rng + ?Sized>(
    hg: &DynamicHypergraph,
    u: VertexId,
    max_node_weight: Weight,
    rng: &mut R,
) -> Result<Option<VertexId>> {
    if !hg.is_active(u) {
        return Err(Error::InactiveVertex(u));
    }
    Ok(PartnerSelector::new(hg.num_vertices()).select(hg, u, max_node_weight, rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::fixtures::h4;
    use crate::hypergraph::Hypergraph;
    use crate::rng::seeded;

    #[test]
    fn ratings() {
        let d = DynamicHypergraph::from(&h4());
        assert_eq!(rate_pair(&d, 1, 0).unwrap(), 1.0);
        assert_eq!(rate_pair(&d, 1, 2).unwrap(), 0.5);
        assert_eq!(rate_pair(&d, 0, 3).unwrap(), 0.0);
    }

    #[test]
    fn rating_requires_active_vertices() {
        let mut d = DynamicHypergraph::from(&h4());
        d.contract(0, 1).unwrap();
        assert!(matches!(rate_pair(&d, 0, 1), Err(Error::InactiveVertex(1))));
    }

    #[test]
    fn selection() {
        let d = DynamicHypergraph::from(&h4());
        let mut rng = seeded(1);
        assert_eq!(select_contraction_partner(&d, 1, u64::MAX, &mut rng).unwrap(), Some(0));
        // weight cap of 1 excludes every pair of unit vertices
        assert_eq!(select_contraction_partner(&d, 1, 1, &mut rng).unwrap(), None);

        let isolated = Hypergraph::new(3, vec![vec![0, 1]], None, None).unwrap();
        let d = DynamicHypergraph::from(&isolated);
        assert_eq!(select_contraction_partner(&d, 2, u64::MAX, &mut rng).unwrap(), None);
    }

    #[test]
    fn ties_are_broken_randomly() {
        let star = Hypergraph::new(4, vec![vec![0, 1], vec![0, 2], vec![0, 3]], None, None).unwrap();
        let d = DynamicHypergraph::from(&star);
        let mut rng = seeded(3);
        let mut seen = [false; 4];
        for _ in 0..200 {
            let v = select_contraction_partner(&d, 0, u64::MAX, &mut rng).unwrap().unwrap();
            seen[v as usize] = true;
        }
        assert_eq!(seen, [false, true, true, true]);
    }
}
