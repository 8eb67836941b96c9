//! Mutable hypergraph supporting single-pair contraction and exact undo.

use crate::error::{Error, Result};
use crate::hypergraph::{EdgeId, Hypergraph, VertexId, Weight};

/// Record of one contraction `absorbed -> survivor`, sufficient to undo it.
///
/// Positions are recorded so that undo restores pin and incidence order
/// exactly, not just as sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionMemento {
    pub survivor: VertexId,
    pub absorbed: VertexId,
    /// `(edge, position)` where `absorbed` was rewritten to `survivor` in place.
    pub replaced_edges: Vec<(EdgeId, u32)>,
    /// `(edge, position)` where `absorbed` was swap-removed because the
    /// survivor was already a pin.
    pub shrunk_edges: Vec<(EdgeId, u32)>,
    /// `(edge, position in the survivor's incidence list)` for edges left
    /// with a single pin and disabled.
    pub removed_edges: Vec<(EdgeId, u32)>,
    depth: usize,
}

impl ContractionMemento {
    /// Stack position this memento was created at.
    pub fn depth(&self) -> usize {
        self.depth
    }
}

/// n-level view of a hypergraph: vertices can be contracted away and
/// hyperedges disabled, always reversibly and in LIFO order.
#[derive(Clone, Debug)]
pub struct DynamicHypergraph {
    pins: Vec<Vec<VertexId>>,
    incidence: Vec<Vec<EdgeId>>,
    vertex_weights: Vec<Weight>,
    edge_weights: Vec<Weight>,
    active: Vec<bool>,
    enabled: Vec<bool>,
    active_count: usize,
    pin_count: usize,
    depth: usize,
    edge_stamp: Vec<u32>,
    stamp: u32,
}

impl PartialEq for DynamicHypergraph {
    fn eq(&self, other: &Self) -> bool {
        self.pins == other.pins
            && self.incidence == other.incidence
            && self.vertex_weights == other.vertex_weights
            && self.edge_weights == other.edge_weights
            && self.active == other.active
            && self.enabled == other.enabled
            && self.active_count == other.active_count
            && self.pin_count == other.pin_count
            && self.depth == other.depth
    }
}

impl From<&Hypergraph> for DynamicHypergraph {
    fn from(hg: &Hypergraph) -> Self {
        Self {
            pins: hg.edge_lists(),
            incidence: hg.vertices().map(|v| hg.incident_edges(v).to_vec()).collect(),
            vertex_weights: hg.vertex_weights().to_vec(),
            edge_weights: hg.edge_weights().to_vec(),
            active: vec![true; hg.num_vertices()],
            enabled: vec![true; hg.num_edges()],
            active_count: hg.num_vertices(),
            pin_count: hg.num_pins(),
            depth: 0,
            edge_stamp: vec![0; hg.num_edges()],
            stamp: 0,
        }
    }
}

impl DynamicHypergraph {
    pub fn num_vertices(&self) -> usize {
        self.active.len()
    }

    pub fn num_edges(&self) -> usize {
        self.enabled.len()
    }

    pub fn active_count(&self) -> usize {
        self.active_count
    }

    /// Pins over enabled hyperedges.
    pub fn pin_count(&self) -> usize {
        self.pin_count
    }

    /// Number of live contractions.
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn is_active(&self, v: VertexId) -> bool {
        self.active[v as usize]
    }

    pub fn is_enabled(&self, e: EdgeId) -> bool {
        self.enabled[e as usize]
    }

    pub fn pins(&self, e: EdgeId) -> &[VertexId] {
        &self.pins[e as usize]
    }

    /// Enabled hyperedges incident to an active vertex.
    pub fn incident_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.incidence[v as usize]
    }

    pub fn vertex_weight(&self, v: VertexId) -> Weight {
        self.vertex_weights[v as usize]
    }

    pub fn edge_weight(&self, e: EdgeId) -> Weight {
        self.edge_weights[e as usize]
    }

    pub fn total_vertex_weight(&self) -> Weight {
        self.active_vertices().map(|v| self.vertex_weight(v)).sum()
    }

    pub fn active_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.active
            .iter()
            .enumerate()
            .filter(|(_, &a)| a)
            .map(|(v, _)| v as VertexId)
    }

    fn require_active(&self, v: VertexId) -> Result<()> {
        match self.active.get(v as usize) {
            Some(true) => Ok(()),
            _ => Err(Error::InactiveVertex(v)),
        }
    }

    /// Merges `absorbed` into `survivor`.
    ///
    /// Hyperedges already containing the survivor lose the absorbed pin (and
    /// are disabled if one pin remains); all others have the absorbed pin
    /// rewritten to the survivor.
    pub fn contract(&mut self, survivor: VertexId, absorbed: VertexId) -> Result<ContractionMemento> {
        if survivor == absorbed {
            return Err(Error::SelfContraction(survivor));
        }
        self.require_active(survivor)?;
        self.require_active(absorbed)?;
        let (a, b) = (survivor as usize, absorbed as usize);

        self.stamp = self.stamp.wrapping_add(1);
        if self.stamp == 0 {
            self.edge_stamp.fill(0);
            self.stamp = 1;
        }
        for &e in &self.incidence[a] {
            self.edge_stamp[e as usize] = self.stamp;
        }

        let mut memento = ContractionMemento {
            survivor,
            absorbed,
            replaced_edges: Vec::new(),
            shrunk_edges: Vec::new(),
            removed_edges: Vec::new(),
            depth: self.depth,
        };
        let b_edges = std::mem::take(&mut self.incidence[b]);
        // Shared edges first, so that disabling only ever touches the
        // survivor's original incidence entries and undo stays LIFO.
        for &e in &b_edges {
            if self.edge_stamp[e as usize] != self.stamp {
                continue;
            }
            let pins = &mut self.pins[e as usize];
            let pos = pins.iter().position(|&p| p == absorbed).expect("incidence mirrors pins");
            pins.swap_remove(pos);
            self.pin_count -= 1;
            memento.shrunk_edges.push((e, pos as u32));
            if pins.len() == 1 {
                let inc = &mut self.incidence[a];
                let ipos = inc.iter().position(|&x| x == e).expect("survivor incident");
                inc.swap_remove(ipos);
                self.enabled[e as usize] = false;
                self.pin_count -= 1;
                memento.removed_edges.push((e, ipos as u32));
            }
        }
        for &e in &b_edges {
            if self.edge_stamp[e as usize] == self.stamp {
                continue;
            }
            let pins = &mut self.pins[e as usize];
            let pos = pins.iter().position(|&p| p == absorbed).expect("incidence mirrors pins");
            pins[pos] = survivor;
            self.incidence[a].push(e);
            memento.replaced_edges.push((e, pos as u32));
        }
        self.incidence[b] = b_edges;

        self.vertex_weights[a] += self.vertex_weights[b];
        self.active[b] = false;
        self.active_count -= 1;
        self.depth += 1;
        Ok(memento)
    }

    /// Reverts `memento`, which must be the most recent live contraction.
    pub fn uncontract(&mut self, memento: &ContractionMemento) -> Result<()> {
        if self.depth == 0 || memento.depth != self.depth - 1 {
            return Err(Error::OutOfOrder {
                expected: self.depth.saturating_sub(1),
                got: memento.depth,
            });
        }
        let (a, b) = (memento.survivor as usize, memento.absorbed as usize);
        for &(e, pos) in memento.replaced_edges.iter().rev() {
            let popped = self.incidence[a].pop();
            debug_assert_eq!(popped, Some(e));
            self.pins[e as usize][pos as usize] = memento.absorbed;
        }
        for &(e, ipos) in memento.removed_edges.iter().rev() {
            undo_swap_remove(&mut self.incidence[a], ipos as usize, e);
            self.enabled[e as usize] = true;
            self.pin_count += 1;
        }
        for &(e, pos) in memento.shrunk_edges.iter().rev() {
            undo_swap_remove(&mut self.pins[e as usize], pos as usize, memento.absorbed);
            self.pin_count += 1;
        }
        self.vertex_weights[a] -= self.vertex_weights[b];
        self.active[b] = true;
        self.active_count += 1;
        self.depth -= 1;
        Ok(())
    }

    /// Compacts the current level into a standalone hypergraph.
    ///
    /// Returns the hypergraph and, for each of its vertices, the id of the
    /// corresponding active vertex here. Disabled hyperedges are dropped.
    pub fn snapshot(&self) -> (Hypergraph, Vec<VertexId>) {
        let mut local = vec![VertexId::MAX; self.num_vertices()];
        let mut map = Vec::with_capacity(self.active_count);
        for v in self.active_vertices() {
            local[v as usize] = map.len() as VertexId;
            map.push(v);
        }
        let mut edges = Vec::new();
        let mut weights = Vec::new();
        for e in 0..self.num_edges() {
            if !self.enabled[e] {
                continue;
            }
            edges.push(self.pins[e].iter().map(|&p| local[p as usize]).collect::<Vec<_>>());
            weights.push(self.edge_weights[e]);
        }
        let vweights = map.iter().map(|&v| self.vertex_weights[v as usize]).collect();
        (Hypergraph::from_parts(map.len(), &edges, vweights, weights), map)
    }
}

fn undo_swap_remove<T: Copy>(list: &mut Vec<T>, pos: usize, value: T) {
    if pos == list.len() {
        list.push(value);
    } else {
        let moved = list[pos];
        list.push(moved);
        list[pos] = value;
    }
}
