use std::sync::Mutex;

/// A stateful transducer that appends at least one item per stage.
pub(crate) trait StageProducer: Send {
    type Item: Clone + Send;

    fn run_stage(&mut self, out: &mut Vec<Self::Item>);
}

/// Random access over the output of a [`StageProducer`], computed on demand
/// and memoized. Answers depend only on the producer, never on query order.
pub(crate) struct Staged<P: StageProducer> {
    state: Mutex<(P, Vec<P::Item>)>,
}

impl<P: StageProducer> Staged<P> {
    pub(crate) fn new(producer: P) -> Self {
        Staged {
            state: Mutex::new((producer, Vec::new())),
        }
    }

    pub(crate) fn get(&self, index: u64) -> P::Item {
        let mut guard = self.state.lock().expect("staged producer poisoned");
        let (producer, out) = &mut *guard;
        while out.len() as u64 <= index {
            let before = out.len();
            producer.run_stage(out);
            assert!(out.len() > before, "stage produced no output");
        }
        out[index as usize].clone()
    }
}
