//! Shared pieces of the acceptance gate: the verdict printer and the
//! brute-force cylinder oracle that cross-checks essential freeness.

use cartan_core::symbolic::Graph;

/// Prints the single verdict line for a criterion and panics when any
/// witness of failure was recorded, listing the first few.
pub fn conclude(criterion: usize, summary: &str, failures: &[String]) {
    if failures.is_empty() {
        println!("criterion {criterion}: PASS - {summary}");
    } else {
        println!("criterion {criterion}: FAIL - {summary}");
        for f in failures.iter().take(10) {
            println!("    {f}");
        }
        panic!("criterion {criterion}: {} failing witness(es)", failures.len());
    }
}

/// Whether some depth-m cylinder lies inside the set of walks x with
/// x_{m+k} = x_{n+k} for all k, the interior test behind essential
/// freeness of the (m, n) shift pair.
///
/// Every walk of length m is tried as a base. A base survives only if
/// each extension up to the check depth keeps the positional equalities;
/// the first branch that could disagree rules it out. A surviving base
/// has walked an out-degree-one cycle long enough to pin the entire
/// future, so the equalities hold on the whole infinite cylinder. A
/// contained cylinder of any length forces such a cycle as well, and
/// walking the cycle for m steps gives a contained base of length
/// exactly m, so searching bases of one length decides the question.
pub fn equality_set_has_interior(g: &Graph, m: usize, n: usize) -> bool {
    let (hi, lo) = if m >= n { (m, n) } else { (n, m) };
    let d = hi - lo;
    if d == 0 {
        return g.n_vertices() > 0;
    }
    let depth = hi + g.n_vertices() + g.n_edges() + 2 * d;
    (0..g.n_vertices() as u32).any(|v| bases_from(g, v, hi, d, depth, &mut Vec::new()))
}

fn bases_from(g: &Graph, at: u32, hi: usize, d: usize, depth: usize, base: &mut Vec<u32>) -> bool {
    if base.len() == hi {
        return contained(g, at, hi, d, depth, base);
    }
    for &e in g.out_edges(at) {
        base.push(e);
        let hit = bases_from(g, g.edge(e).dst, hi, d, depth, base);
        base.pop();
        if hit {
            return true;
        }
    }
    false
}

/// All extensions of the base must repeat the edge d positions back; a
/// vertex offering any other edge kills the base, so the walk is forced
/// and the check is linear in the depth.
fn contained(g: &Graph, at: u32, hi: usize, d: usize, depth: usize, walk: &mut Vec<u32>) -> bool {
    if walk.len() == depth {
        return true;
    }
    let p = walk.len();
    debug_assert!(p >= hi);
    for &e in g.out_edges(at) {
        if walk[p - d] != e {
            return false;
        }
        walk.push(e);
        let ok = contained(g, g.edge(e).dst, hi, d, depth, walk);
        walk.pop();
        if !ok {
            return false;
        }
    }
    true
}
