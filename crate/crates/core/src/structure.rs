//! Nonzero-pattern structure: strongly connected components and irreducibility.

use crate::matrix::NonnegMatrix;

/// Strongly connected components of the digraph with an arc i → j whenever
/// `a_ij > 0` and `i != j`, listed in a topological order of the
/// condensation (sources first). Each block is sorted ascending.
pub fn scc_blocks(a: &NonnegMatrix) -> Vec<Vec<usize>> {
    let n = a.n();
    let succ: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).filter(|&j| j != i && a.get(i, j) > 0.0).collect())
        .collect();
    let mut comps = tarjan(&succ);
    // Tarjan emits components sinks first.
    comps.reverse();
    for c in &mut comps {
        c.sort_unstable();
    }
    comps
}

/// Iterative Tarjan so deep chains cannot overflow the stack.
fn tarjan(succ: &[Vec<usize>]) -> Vec<Vec<usize>> {
    const UNSEEN: usize = usize::MAX;
    let n = succ.len();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut next = 0;
    // (vertex, position in its successor list)
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        call.push((root, 0));
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if let Some(&w) = succ[v].get(*pos) {
                *pos += 1;
                if index[w] == UNSEEN {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comps.push(comp);
            }
        }
    }
    comps
}

/// True iff the nonzero pattern is strongly connected; 1×1 counts as irreducible.
pub fn is_irreducible(a: &NonnegMatrix) -> bool {
    a.n() == 1 || scc_blocks(a).len() == 1
}
