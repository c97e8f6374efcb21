//! Fixture graphs shared by the benchmarks.

use std::path::PathBuf;

use mcentrality::{generate, parse_edge_list, Graph};

/// Path to a file under the workspace `data/` directory.
pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

/// The bundled dolphin social network.
pub fn dolphins() -> Graph {
    let file = std::fs::File::open(data_path("dolphins.txt")).expect("data/dolphins.txt");
    parse_edge_list(std::io::BufReader::new(file))
        .expect("dolphins parses")
        .graph
}

/// Scale-free graph with mean degree about `2k`.
pub fn scale_free(n: usize, k: usize) -> Graph {
    generate::barabasi_albert(n, k, 0x5eed)
}

/// Erdős–Rényi graph with mean degree `mean_degree`.
pub fn random(n: usize, mean_degree: usize) -> Graph {
    generate::gnm(n, n * mean_degree / 2, 0x5eed)
}

#[cfg(test)]
mod tests {
    #[test]
    fn fixtures_load() {
        assert_eq!(super::dolphins().node_count(), 62);
        assert_eq!(super::random(100, 4).edge_count(), 200);
    }
}
