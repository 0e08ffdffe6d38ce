//! Post-processing for enhanced volumes: binarization, per-slice intensity
//! normalization, and cleanup of skeleton graphs extracted from binarized
//! output.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::volume::{Dims, Volume};

/// Binarizes a volume: output is 1 where `value > t`, else 0. Idempotent for
/// any `t` in `(0, 1)`.
pub fn threshold(vol: &Volume, t: f32) -> Volume {
    let data = vol
        .data()
        .iter()
        .map(|&v| if v > t { 1.0 } else { 0.0 })
        .collect();
    Volume::from_vec(vol.dims(), data).expect("binary values are finite")
}

/// Nearest-rank percentile of the voxel values: the smallest value such that
/// at least `percentile` percent of voxels are `<=` it.
pub fn percentile_value(vol: &Volume, percentile: f64) -> Result<f32> {
    if !(0.0..=100.0).contains(&percentile) {
        return Err(Error::InvalidParameter(format!(
            "percentile {percentile} not in [0, 100]"
        )));
    }
    let mut sorted = vol.data().to_vec();
    sorted.sort_unstable_by(f32::total_cmp);
    let n = sorted.len();
    let rank = ((percentile / 100.0) * n as f64).ceil() as usize;
    Ok(sorted[rank.clamp(1, n) - 1])
}

fn median_f64(values: &mut [f64]) -> f64 {
    values.sort_unstable_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Rescales every z-slice so its median matches `target`; `None` picks the
/// median of the slice medians. Slices whose median is at or below `1e-12`
/// (empty or degenerate) are left untouched, so a second application is a
/// no-op up to rounding.
pub fn normalize_slice_median(vol: &Volume, target: Option<f64>) -> Result<Volume> {
    if let Some(t) = target {
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "target median {t} must be positive and finite"
            )));
        }
    }
    let dims = vol.dims();
    let slice_len = dims.nx * dims.ny;
    let mut medians = Vec::with_capacity(dims.nz);
    for z in 0..dims.nz {
        let slice = &vol.data()[z * slice_len..(z + 1) * slice_len];
        let mut values: Vec<f64> = slice.iter().map(|&v| v as f64).collect();
        medians.push(median_f64(&mut values));
    }
    let target = match target {
        Some(t) => t,
        None => median_f64(&mut medians.clone()),
    };

    let mut out = vol.data().to_vec();
    for (z, &median) in medians.iter().enumerate() {
        if median <= 1e-12 {
            continue;
        }
        let scale = target / median;
        for v in &mut out[z * slice_len..(z + 1) * slice_len] {
            *v = (*v as f64 * scale) as f32;
        }
    }
    Volume::from_vec(dims, out)
}

/// An undirected spatial graph: nodes with real coordinates, edges between
/// distinct nodes. No self-loops, no duplicate edges, no dangling endpoints.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SkeletonGraph {
    nodes: BTreeMap<u64, [f64; 3]>,
    edges: BTreeSet<(u64, u64)>,
}

#[derive(Serialize, Deserialize)]
struct GraphNodeRecord {
    id: u64,
    xyz: [f64; 3],
}

#[derive(Serialize, Deserialize)]
struct GraphFileRecord {
    nodes: Vec<GraphNodeRecord>,
    edges: Vec<[u64; 2]>,
}

impl SkeletonGraph {
    pub fn new() -> Self {
        SkeletonGraph::default()
    }

    /// Adds a node. Duplicate ids and non-finite coordinates are rejected.
    pub fn add_node(&mut self, id: u64, xyz: [f64; 3]) -> Result<()> {
        if xyz.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidGraph(format!(
                "node {id} has non-finite coordinates"
            )));
        }
        if self.nodes.insert(id, xyz).is_some() {
            return Err(Error::InvalidGraph(format!("duplicate node id {id}")));
        }
        Ok(())
    }

    /// Adds an undirected edge. Both endpoints must exist and differ; adding
    /// an edge twice is a no-op.
    pub fn add_edge(&mut self, a: u64, b: u64) -> Result<()> {
        if a == b {
            return Err(Error::InvalidGraph(format!("self-loop at node {a}")));
        }
        for id in [a, b] {
            if !self.nodes.contains_key(&id) {
                return Err(Error::DanglingEdge { id });
            }
        }
        self.edges.insert((a.min(b), a.max(b)));
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Nodes in ascending id order.
    pub fn nodes(&self) -> impl Iterator<Item = (u64, [f64; 3])> + '_ {
        self.nodes.iter().map(|(&id, &xyz)| (id, xyz))
    }

    pub fn node(&self, id: u64) -> Option<[f64; 3]> {
        self.nodes.get(&id).copied()
    }

    /// Edges as `(low id, high id)` pairs in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.edges.iter().copied()
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let record: GraphFileRecord = serde_json::from_str(text)?;
        let mut graph = SkeletonGraph::new();
        for node in record.nodes {
            graph.add_node(node.id, node.xyz)?;
        }
        for [a, b] in record.edges {
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop at node {a}")));
            }
            if !graph.edges.insert((a.min(b), a.max(b))) {
                return Err(Error::InvalidGraph(format!("duplicate edge {a}-{b}")));
            }
            for id in [a, b] {
                if !graph.nodes.contains_key(&id) {
                    return Err(Error::DanglingEdge { id });
                }
            }
        }
        Ok(graph)
    }

    pub fn to_json_string(&self) -> Result<String> {
        let record = GraphFileRecord {
            nodes: self
                .nodes()
                .map(|(id, xyz)| GraphNodeRecord { id, xyz })
                .collect(),
            edges: self.edges().map(|(a, b)| [a, b]).collect(),
        };
        Ok(serde_json::to_string_pretty(&record)?)
    }

    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json_str(&text)
    }

    pub fn to_json_file(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json_string()?).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }
}

/// Disjoint-set forest over node indices.
struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, i: usize) -> usize {
        if self.parent[i] != i {
            let root = self.find(self.parent[i]);
            self.parent[i] = root;
        }
        self.parent[i]
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // Smaller root index wins, keeping cluster labels deterministic.
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.parent[hi] = lo;
        }
    }
}

/// Collapses clusters of nearby nodes until no two nodes are closer than
/// `distance`.
///
/// Each pass single-links all node pairs closer than `distance`, replaces
/// every cluster by its centroid under the cluster's smallest id, and remaps
/// edges (dropping the self-loops and duplicates this creates). Passes repeat
/// until nothing merges; since every merging pass removes at least one node,
/// termination is guaranteed.
pub fn merge_skeleton_nodes(graph: &SkeletonGraph, distance: f64) -> Result<SkeletonGraph> {
    if !(distance.is_finite() && distance > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "merge distance {distance} must be positive and finite"
        )));
    }
    let mut current = graph.clone();
    loop {
        let ids: Vec<u64> = current.nodes.keys().copied().collect();
        let pos: Vec<[f64; 3]> = current.nodes.values().copied().collect();
        let n = ids.len();
        let mut uf = UnionFind::new(n);
        let d2 = distance * distance;
        for i in 0..n {
            for j in (i + 1)..n {
                let dx = pos[i][0] - pos[j][0];
                let dy = pos[i][1] - pos[j][1];
                let dz = pos[i][2] - pos[j][2];
                if dx * dx + dy * dy + dz * dz < d2 {
                    uf.union(i, j);
                }
            }
        }

        let mut clusters: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..n {
            let root = uf.find(i);
            clusters.entry(root).or_default().push(i);
        }
        if clusters.values().all(|members| members.len() == 1) {
            return Ok(current);
        }

        let mut remap: BTreeMap<u64, u64> = BTreeMap::new();
        let mut next = SkeletonGraph::new();
        for members in clusters.values() {
            let new_id = ids[members[0]];
            let mut centroid = [0.0f64; 3];
            for &m in members {
                centroid[0] += pos[m][0];
                centroid[1] += pos[m][1];
                centroid[2] += pos[m][2];
            }
            let count = members.len() as f64;
            let xyz = if members.len() == 1 {
                // Untouched nodes keep their exact coordinates.
                pos[members[0]]
            } else {
                [centroid[0] / count, centroid[1] / count, centroid[2] / count]
            };
            next.add_node(new_id, xyz)?;
            for &m in members {
                remap.insert(ids[m], new_id);
            }
        }
        for (a, b) in current.edges() {
            let (na, nb) = (remap[&a], remap[&b]);
            if na != nb {
                next.add_edge(na, nb)?;
            }
        }
        current = next;
    }
}

/// 3D Bresenham segment between two voxels, inclusive of both endpoints.
/// Consecutive voxels differ by at most one step per axis (26-connected).
pub fn bresenham_3d(a: [i64; 3], b: [i64; 3]) -> Vec<[i64; 3]> {
    let dx = (b[0] - a[0]).abs();
    let dy = (b[1] - a[1]).abs();
    let dz = (b[2] - a[2]).abs();
    let sx = (b[0] - a[0]).signum();
    let sy = (b[1] - a[1]).signum();
    let sz = (b[2] - a[2]).signum();
    let (mut x, mut y, mut z) = (a[0], a[1], a[2]);
    let mut points = Vec::with_capacity(dx.max(dy).max(dz) as usize + 1);

    if dx >= dy && dx >= dz {
        let mut e_y = 2 * dy - dx;
        let mut e_z = 2 * dz - dx;
        for _ in 0..dx {
            points.push([x, y, z]);
            if e_y > 0 {
                y += sy;
                e_y -= 2 * dx;
            }
            if e_z > 0 {
                z += sz;
                e_z -= 2 * dx;
            }
            e_y += 2 * dy;
            e_z += 2 * dz;
            x += sx;
        }
    } else if dy >= dx && dy >= dz {
        let mut e_x = 2 * dx - dy;
        let mut e_z = 2 * dz - dy;
        for _ in 0..dy {
            points.push([x, y, z]);
            if e_x > 0 {
                x += sx;
                e_x -= 2 * dy;
            }
            if e_z > 0 {
                z += sz;
                e_z -= 2 * dy;
            }
            e_x += 2 * dx;
            e_z += 2 * dz;
            y += sy;
        }
    } else {
        let mut e_x = 2 * dx - dz;
        let mut e_y = 2 * dy - dz;
        for _ in 0..dz {
            points.push([x, y, z]);
            if e_x > 0 {
                x += sx;
                e_x -= 2 * dz;
            }
            if e_y > 0 {
                y += sy;
                e_y -= 2 * dz;
            }
            e_x += 2 * dx;
            e_y += 2 * dy;
            z += sz;
        }
    }
    points.push(b);
    points
}

/// Rasterizes a skeleton graph into a binary volume: every node voxel and
/// every Bresenham segment between edge endpoints is set to 1.
///
/// Node coordinates are rounded half-away-from-zero; if any rounded node
/// falls outside `dims`, the smallest offending id is reported.
pub fn rasterize_skeleton(graph: &SkeletonGraph, dims: Dims) -> Result<Volume> {
    let mut rounded: BTreeMap<u64, [i64; 3]> = BTreeMap::new();
    for (id, xyz) in graph.nodes() {
        let r = [
            xyz[0].round() as i64,
            xyz[1].round() as i64,
            xyz[2].round() as i64,
        ];
        let inside = r[0] >= 0
            && r[1] >= 0
            && r[2] >= 0
            && r[0] < dims.nx as i64
            && r[1] < dims.ny as i64
            && r[2] < dims.nz as i64;
        if !inside {
            return Err(Error::NodeOutOfBounds { id });
        }
        rounded.insert(id, r);
    }

    let mut vol = Volume::zeros(dims);
    let mark = |p: [i64; 3], vol: &mut Volume| {
        vol.set(p[0] as usize, p[1] as usize, p[2] as usize, 1.0);
    };
    for r in rounded.values() {
        mark(*r, &mut vol);
    }
    for (a, b) in graph.edges() {
        for p in bresenham_3d(rounded[&a], rounded[&b]) {
            mark(p, &mut vol);
        }
    }
    Ok(vol)
}
