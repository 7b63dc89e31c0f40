//! Mutable search state shared by the sequential Johnson enumerator and the
//! fine-grained parallel tasks (which copy it on steal).

use smallvec::SmallVec;

use crate::graph::{Timestamp, VertexId};
use crate::metrics::VisitCounters;

/// One vertex on the current path plus the timestamps of the hop that
/// reached it (empty for the root).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathFrame {
    pub v: VertexId,
    pub hop_ts: SmallVec<[Timestamp; 4]>,
}

/// Johnson search state: current path, blocked set, unblock lists.
///
/// `blk_depth` tags each blocked vertex with the path length at block time;
/// copy-on-steal with complete unblocking and the debug assertions need it.
/// `blk_journal` records blocks in order so state can be reset between
/// start-edge searches without an O(n) sweep.
#[derive(Debug, Clone)]
pub struct JohnsonState {
    pub pi: Vec<PathFrame>,
    pub blk: Vec<bool>,
    pub blk_depth: Vec<u32>,
    pub blist: Vec<Vec<VertexId>>,
    blk_journal: Vec<VertexId>,
    blist_touched: Vec<VertexId>,
}

impl JohnsonState {
    pub fn new(n: usize) -> Self {
        JohnsonState {
            pi: Vec::new(),
            blk: vec![false; n],
            blk_depth: vec![0; n],
            blist: vec![Vec::new(); n],
            blk_journal: Vec::new(),
            blist_touched: Vec::new(),
        }
    }

    /// Clears everything a finished start-edge search may have left behind.
    pub fn reset(&mut self) {
        self.pi.clear();
        for &v in &self.blk_journal {
            self.blk[v as usize] = false;
        }
        self.blk_journal.clear();
        for &w in &self.blist_touched {
            self.blist[w as usize].clear();
        }
        self.blist_touched.clear();
    }

    /// Pushes `v` onto the path and blocks it.
    pub fn push(&mut self, v: VertexId, hop_ts: SmallVec<[Timestamp; 4]>) {
        self.pi.push(PathFrame { v, hop_ts });
        self.block(v, self.pi.len() as u32);
    }

    pub fn block(&mut self, v: VertexId, depth: u32) {
        if !self.blk[v as usize] {
            self.blk[v as usize] = true;
            self.blk_journal.push(v);
        }
        self.blk_depth[v as usize] = depth;
    }

    pub fn pop(&mut self) -> Option<PathFrame> {
        self.pi.pop()
    }

    pub fn register_blist(&mut self, w: VertexId, v: VertexId) {
        let list = &mut self.blist[w as usize];
        if !list.contains(&v) {
            if list.is_empty() {
                self.blist_touched.push(w);
            }
            list.push(v);
        }
    }

    /// Unblocks `v` and cascades through the unblock lists. No-op when `v`
    /// is not blocked.
    pub fn recursive_unblock(&mut self, v: VertexId, counters: &mut VisitCounters) {
        if !self.blk[v as usize] {
            return;
        }
        let mut stack: SmallVec<[VertexId; 8]> = SmallVec::new();
        stack.push(v);
        while let Some(u) = stack.pop() {
            if !self.blk[u as usize] {
                continue;
            }
            counters.unblock();
            self.blk[u as usize] = false;
            for w in std::mem::take(&mut self.blist[u as usize]) {
                if self.blk[w as usize] {
                    stack.push(w);
                }
            }
        }
    }

    /// Copy-on-steal with complete unblocking: drop every block recorded at
    /// path length >= `d`. Unblock lists are left as they are.
    pub fn complete_unblock_from_depth(&mut self, d: u32) {
        let blk = &mut self.blk;
        let depth = &self.blk_depth;
        self.blk_journal.retain(|&v| {
            if blk[v as usize] && depth[v as usize] >= d {
                blk[v as usize] = false;
            }
            blk[v as usize]
        });
    }

    /// Debug invariant: every path vertex is blocked.
    pub fn path_blocked_invariant(&self) -> bool {
        self.pi.iter().all(|f| self.blk[f.v as usize])
    }

    /// Test support: true when no block flags or unblock-list entries remain.
    pub fn is_pristine(&self) -> bool {
        self.pi.is_empty()
            && self.blk.iter().all(|&b| !b)
            && self.blist.iter().all(|l| l.is_empty())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unblock_single() {
        let mut st = JohnsonState::new(5);
        let mut c = VisitCounters::default();
        st.block(2, 1);
        st.recursive_unblock(2, &mut c);
        assert!(st.is_pristine());
    }

    #[test]
    fn unblock_cascades_through_blists() {
        let mut st = JohnsonState::new(5);
        let mut c = VisitCounters::default();
        st.block(2, 1);
        st.block(3, 2);
        st.block(4, 3);
        st.register_blist(2, 3);
        st.register_blist(3, 4);
        st.recursive_unblock(2, &mut c);
        assert!(st.is_pristine());
        assert_eq!(c.unblock_calls, 3);
    }

    #[test]
    fn unblock_of_unblocked_is_noop() {
        let mut st = JohnsonState::new(3);
        let mut c = VisitCounters::default();
        st.register_blist(1, 2);
        st.recursive_unblock(0, &mut c);
        assert_eq!(c.unblock_calls, 0);
        assert_eq!(st.blist[1], vec![2]);
    }

    #[test]
    fn complete_unblock_respects_depth_tags() {
        let mut st = JohnsonState::new(6);
        st.block(1, 1);
        st.block(2, 2);
        st.block(3, 3);
        st.complete_unblock_from_depth(2);
        assert!(st.blk[1]);
        assert!(!st.blk[2] && !st.blk[3]);
    }

    #[test]
    fn reset_clears_leftovers() {
        let mut st = JohnsonState::new(4);
        st.push(0, SmallVec::new());
        st.block(2, 2);
        st.register_blist(3, 2);
        st.pi.clear();
        st.reset();
        assert!(st.is_pristine());
    }
}
