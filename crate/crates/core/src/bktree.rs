//! Burkhard-Keller tree over symbol sequences under Levenshtein distance.
//!
//! Keys are sequences of any comparable symbol. Several items may share a
//! key; they live on the same node. Nodes are kept in one arena vector.

use alloc::vec;
use alloc::vec::Vec;

use crate::distance::levenshtein;

#[derive(Debug, Clone)]
struct Node<S> {
    key: Vec<S>,
    items: Vec<usize>,
    children: Vec<(usize, usize)>,
}

#[derive(Debug, Clone)]
pub struct BkTree<S> {
    nodes: Vec<Node<S>>,
}

impl<S> Default for BkTree<S> {
    fn default() -> Self {
        BkTree { nodes: Vec::new() }
    }
}

impl<S: PartialEq> BkTree<S> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Number of distinct keys.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn insert(&mut self, key: Vec<S>, item: usize) {
        if self.nodes.is_empty() {
            self.nodes.push(Node {
                key,
                items: vec![item],
                children: Vec::new(),
            });
            return;
        }
        let mut at = 0;
        loop {
            let d = levenshtein(&self.nodes[at].key, &key);
            if d == 0 {
                self.nodes[at].items.push(item);
                return;
            }
            match self.nodes[at].children.iter().find(|(cd, _)| *cd == d) {
                Some(&(_, child)) => at = child,
                None => {
                    let idx = self.nodes.len();
                    self.nodes.push(Node {
                        key,
                        items: vec![item],
                        children: Vec::new(),
                    });
                    self.nodes[at].children.push((d, idx));
                    return;
                }
            }
        }
    }

    /// All items whose key lies within `radius` of `query`, paired with the
    /// distance. Order is unspecified.
    pub fn find(&self, query: &[S], radius: usize) -> Vec<(usize, usize)> {
        let mut found = Vec::new();
        if self.nodes.is_empty() {
            return found;
        }
        let mut stack = vec![0usize];
        while let Some(at) = stack.pop() {
            let node = &self.nodes[at];
            let d = levenshtein(&node.key, query);
            if d <= radius {
                found.extend(node.items.iter().map(|&item| (item, d)));
            }
            let (lo, hi) = (d.saturating_sub(radius), d + radius);
            stack.extend(
                node.children
                    .iter()
                    .filter(|(cd, _)| (lo..=hi).contains(cd))
                    .map(|&(_, child)| child),
            );
        }
        found
    }

    /// True if some key lies within `radius` of `query`. Stops at the
    /// first hit.
    pub fn any_within(&self, query: &[S], radius: usize) -> bool {
        if self.nodes.is_empty() {
            return false;
        }
        let mut stack = vec![0usize];
        while let Some(at) = stack.pop() {
            let node = &self.nodes[at];
            let d = levenshtein(&node.key, query);
            if d <= radius {
                return true;
            }
            let (lo, hi) = (d - radius, d + radius);
            stack.extend(
                node.children
                    .iter()
                    .filter(|(cd, _)| (lo..=hi).contains(cd))
                    .map(|&(_, child)| child),
            );
        }
        false
    }
}
