//! Fixtures and brute-force reference computations shared by the
//! integration suites. Everything here recomputes quantities from their
//! definitions, independently of the library's enumeration and assembly
//! code, so the suites compare two genuinely different routes to the same
//! numbers.
#![allow(dead_code)]

use cbne::complex::{
    generate_complete_partite, generate_disjoint_cliques, AnyComplex, CliqueComplex, Complex,
    ExplicitComplex, Graph, Simplex,
};
use cbne::randgraphs::{gen_gnp, ErConfig};
use itertools::Itertools;

pub fn simplex(vs: &[u32]) -> Simplex {
    Simplex::new(vs.to_vec()).expect("valid simplex literal")
}

/// Boundary of a triangle: three edges, no filling. β₁ = 1 and every
/// normalized trace equals 1/3.
pub fn hollow_triangle() -> ExplicitComplex {
    ExplicitComplex::from_maximal(3, vec![vec![0, 1], vec![0, 2], vec![1, 2]])
        .expect("hollow triangle fixture")
}

/// Filled triangle as a clique complex. β₁ = 0.
pub fn k3() -> CliqueComplex {
    let mut g = Graph::new(3);
    for (u, v) in [(0, 1), (0, 2), (1, 2)] {
        g.add_edge(u, v).expect("triangle edges");
    }
    CliqueComplex::new(g)
}

/// The 4-cycle as the complete bipartite graph K_{2,2} (parts {0,2} and
/// {1,3}). β₁ = 1.
pub fn c4() -> CliqueComplex {
    generate_complete_partite(1, 2).expect("c4 fixture")
}

/// Octahedron boundary = complete tripartite K_{2,2,2}. β₂ = 1.
pub fn octahedron() -> CliqueComplex {
    generate_complete_partite(2, 2).expect("octahedron fixture")
}

/// Two disjoint triangles: at the top dimension k = 2, β₂ = 0 and the
/// second-moment sandwich collapses to equality.
pub fn disjoint_triangles() -> CliqueComplex {
    generate_disjoint_cliques(2, 2).expect("disjoint triangles fixture")
}

/// The five standing fixtures with their interesting dimension.
pub fn fixtures() -> Vec<(&'static str, AnyComplex, usize)> {
    vec![
        (
            "hollow-triangle",
            AnyComplex::Explicit(hollow_triangle()),
            1,
        ),
        ("k3", AnyComplex::Clique(k3()), 1),
        ("c4", AnyComplex::Clique(c4()), 1),
        ("octahedron", AnyComplex::Clique(octahedron()), 2),
        (
            "disjoint-triangles",
            AnyComplex::Clique(disjoint_triangles()),
            2,
        ),
    ]
}

pub fn gnp(n: usize, p: f64, seed: u64) -> CliqueComplex {
    CliqueComplex::new(gen_gnp(&ErConfig { n, p, seed }).expect("seeded G(n,p)"))
}

/// The deterministic (n, p, seed) grid used by the equivalence and sandwich
/// sweeps: 100 seeded draws cycling n over 8..=12 and p over the three
/// standard densities.
pub fn random_grid() -> Vec<CliqueComplex> {
    (0..100u64)
        .map(|i| {
            gnp(
                8 + (i as usize % 5),
                [0.4, 0.6, 0.8][(i as usize / 5) % 3],
                i,
            )
        })
        .collect()
}

/// Every k-simplex by membership-testing all (k+1)-subsets of the vertex
/// set, in lexicographic order.
pub fn brute_force_k_simplices<C: Complex + ?Sized>(cx: &C, k: usize) -> Vec<Simplex> {
    (0..cx.vertex_count() as u32)
        .combinations(k + 1)
        .map(|vs| simplex(&vs))
        .filter(|s| cx.contains(s).expect("in-range subset"))
        .collect()
}

pub fn union_in_complex<C: Complex + ?Sized>(cx: &C, a: &Simplex, b: &Simplex) -> bool {
    let mut vs: Vec<u32> = a.vertices().iter().chain(b.vertices()).copied().collect();
    vs.sort_unstable();
    vs.dedup();
    cx.contains(&simplex(&vs)).expect("in-range union")
}

/// Simplex-graph neighbors straight from the definition: τ ≠ σ sharing k
/// vertices whose union is not a simplex. Returned in lexicographic order.
pub fn brute_force_neighbors<C: Complex + ?Sized>(cx: &C, sigma: &Simplex) -> Vec<Simplex> {
    let k = sigma.dim();
    brute_force_k_simplices(cx, k)
        .into_iter()
        .filter(|tau| {
            tau != sigma && sigma.intersection_size(tau) == k && !union_in_complex(cx, sigma, tau)
        })
        .collect()
}

/// Dense row-major copy of a boundary matrix, for composition checks.
pub fn dense_boundary(b: &cbne::laplacian::BoundaryMatrix) -> Vec<Vec<i64>> {
    let mut out = vec![vec![0i64; b.cols.len()]; b.rows.len()];
    for (j, column) in b.columns.iter().enumerate() {
        for &(i, sign) in column {
            out[i as usize][j] = sign as i64;
        }
    }
    out
}

/// Runs the packaged binary in `dir` and returns its output; panics only if
/// the process cannot be spawned (non-zero exits are for the caller).
pub fn run_cli(dir: &std::path::Path, args: &[&str]) -> std::process::Output {
    std::process::Command::new(env!("CARGO_BIN_EXE_cbne"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary spawns")
}
