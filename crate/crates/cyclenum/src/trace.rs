//! Event traces for the degeneracy tests: a single-worker fine-grained run
//! must replay the exact push/pop/report/unblock sequence of its sequential
//! counterpart.

use crate::graph::VertexId;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceEvent {
    Push(VertexId),
    Pop(VertexId),
    Report,
    Unblock(VertexId),
}

/// Optional recorder. A disabled recorder costs one branch per event.
#[derive(Debug, Default)]
pub struct Recorder {
    events: Option<Vec<TraceEvent>>,
}

impl Recorder {
    pub fn disabled() -> Self {
        Recorder { events: None }
    }

    pub fn enabled() -> Self {
        Recorder { events: Some(Vec::new()) }
    }

    #[inline]
    pub fn emit(&mut self, ev: TraceEvent) {
        if let Some(v) = self.events.as_mut() {
            v.push(ev);
        }
    }

    pub fn take(self) -> Vec<TraceEvent> {
        self.events.unwrap_or_default()
    }

    pub fn is_enabled(&self) -> bool {
        self.events.is_some()
    }

    pub fn absorb(&mut self, other: Recorder) {
        if let (Some(mine), Some(theirs)) = (self.events.as_mut(), other.events) {
            mine.extend(theirs);
        }
    }
}
