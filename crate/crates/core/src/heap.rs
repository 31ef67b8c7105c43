//! Binary heap addressed by project index, with update-key and removal.
//!
//! Equal priorities are ordered by ascending index, which makes every pop
//! sequence deterministic.

const ABSENT: usize = usize::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// Largest priority on top.
    Max,
    /// Smallest priority on top.
    Min,
}

#[derive(Clone, Debug)]
pub struct AddressableHeap {
    dir: Direction,
    /// (index, priority) in heap order
    slots: Vec<(usize, i64)>,
    /// index -> slot, or ABSENT
    pos: Vec<usize>,
}

impl AddressableHeap {
    /// Empty heap accepting indices `0..capacity`.
    pub fn new(dir: Direction, capacity: usize) -> Self {
        AddressableHeap {
            dir,
            slots: Vec::with_capacity(capacity),
            pos: vec![ABSENT; capacity],
        }
    }

    pub fn direction(&self) -> Direction {
        self.dir
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn contains(&self, idx: usize) -> bool {
        self.pos[idx] != ABSENT
    }

    pub fn priority(&self, idx: usize) -> Option<i64> {
        let p = self.pos[idx];
        (p != ABSENT).then(|| self.slots[p].1)
    }

    pub fn peek(&self) -> Option<(usize, i64)> {
        self.slots.first().copied()
    }

    /// Entries in internal slot order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.slots.iter().copied()
    }

    #[inline]
    fn before(&self, a: (usize, i64), b: (usize, i64)) -> bool {
        match self.dir {
            Direction::Max => a.1 > b.1 || (a.1 == b.1 && a.0 < b.0),
            Direction::Min => a.1 < b.1 || (a.1 == b.1 && a.0 < b.0),
        }
    }

    /// Panics if `idx` is already present.
    pub fn insert(&mut self, idx: usize, priority: i64) {
        assert!(!self.contains(idx), "index {idx} already in heap");
        self.slots.push((idx, priority));
        let at = self.slots.len() - 1;
        self.pos[idx] = at;
        self.sift_up(at);
    }

    /// Removes `idx`, returning its priority if it was present.
    pub fn remove(&mut self, idx: usize) -> Option<i64> {
        let at = self.pos[idx];
        if at == ABSENT {
            return None;
        }
        let last = self.slots.len() - 1;
        self.swap(at, last);
        let (_, prio) = self.slots.pop().unwrap();
        self.pos[idx] = ABSENT;
        if at < self.slots.len() {
            self.restore(at);
        }
        Some(prio)
    }

    /// Changes the priority of a present index. Panics if absent.
    pub fn update(&mut self, idx: usize, priority: i64) {
        let at = self.pos[idx];
        assert!(at != ABSENT, "index {idx} not in heap");
        self.slots[at].1 = priority;
        self.restore(at);
    }

    /// Makes membership and priority of `idx` match `entry`.
    pub fn set(&mut self, idx: usize, entry: Option<i64>) {
        match (self.contains(idx), entry) {
            (true, Some(p)) => self.update(idx, p),
            (true, None) => {
                self.remove(idx);
            }
            (false, Some(p)) => self.insert(idx, p),
            (false, None) => {}
        }
    }

    pub fn pop(&mut self) -> Option<(usize, i64)> {
        let top = self.peek()?;
        self.remove(top.0);
        Some(top)
    }

    /// The best `t` entries in heap order, by popping and reinserting.
    pub fn top(&mut self, t: usize, out: &mut Vec<(usize, i64)>) {
        out.clear();
        for _ in 0..t {
            match self.pop() {
                Some(e) => out.push(e),
                None => break,
            }
        }
        for &(i, p) in out.iter() {
            self.insert(i, p);
        }
    }

    fn restore(&mut self, at: usize) {
        if at > 0 && self.before(self.slots[at], self.slots[(at - 1) / 2]) {
            self.sift_up(at);
        } else {
            self.sift_down(at);
        }
    }

    fn swap(&mut self, a: usize, b: usize) {
        self.slots.swap(a, b);
        self.pos[self.slots[a].0] = a;
        self.pos[self.slots[b].0] = b;
    }

    fn sift_up(&mut self, mut at: usize) {
        while at > 0 {
            let parent = (at - 1) / 2;
            if !self.before(self.slots[at], self.slots[parent]) {
                break;
            }
            self.swap(at, parent);
            at = parent;
        }
    }

    fn sift_down(&mut self, mut at: usize) {
        let len = self.slots.len();
        loop {
            let (l, r) = (2 * at + 1, 2 * at + 2);
            let mut best = at;
            if l < len && self.before(self.slots[l], self.slots[best]) {
                best = l;
            }
            if r < len && self.before(self.slots[r], self.slots[best]) {
                best = r;
            }
            if best == at {
                break;
            }
            self.swap(at, best);
            at = best;
        }
    }

    /// Checks heap order and the position map.
    pub fn check(&self) -> Result<(), String> {
        for (at, &(idx, _)) in self.slots.iter().enumerate() {
            if self.pos[idx] != at {
                return Err(format!(
                    "position map of {idx} points to {}, not {at}",
                    self.pos[idx]
                ));
            }
            if at > 0 && self.before(self.slots[at], self.slots[(at - 1) / 2]) {
                return Err(format!("heap order broken at slot {at}"));
            }
        }
        let present = self.pos.iter().filter(|&&p| p != ABSENT).count();
        if present != self.slots.len() {
            return Err(format!(
                "{present} indices mapped but {} stored",
                self.slots.len()
            ));
        }
        Ok(())
    }
}
