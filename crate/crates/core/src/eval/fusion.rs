//! Combining per-class relation scores with a class-agnostic existence score.

use ndarray::{Array3, ArrayView2, ArrayView3, Axis};

use crate::model::{InstanceId, RelationEdge, RelationType};

use super::EvalError;

/// `fused[i][j][c] = rel[i][j][c] * exist[i][j]`.
///
/// `rel` is `N x N x k`, `exist` is `N x N`.
pub fn fuse_auxiliary(rel: ArrayView3<'_, f64>, exist: ArrayView2<'_, f64>) -> Result<Array3<f64>, EvalError> {
    let (n, m, _) = rel.dim();
    if exist.dim() != (n, m) {
        return Err(EvalError::ShapeMismatch { relation: rel.shape().to_vec(), existence: exist.shape().to_vec() });
    }
    Ok(&rel * &exist.insert_axis(Axis(2)))
}

/// Edge-list form of the same product: every edge carrying an existence value
/// has its score multiplied by it. Edges without a score are left alone.
pub fn fuse_edge_scores(edges: &mut [RelationEdge]) {
    for e in edges {
        if let (Some(score), Some(exist)) = (e.score, e.existence) {
            e.score = Some(score * exist);
        }
    }
}

/// Turn a dense `N x N x 8` score array into scored edges, `ids[i]` naming
/// row/column `i`. Channel `c` is `RelationType::ALL[c]`. Diagonal entries
/// and scores not above `min_score` are skipped.
pub fn dense_to_edges(ids: &[InstanceId], scores: ArrayView3<'_, f64>, min_score: f64) -> Vec<RelationEdge> {
    let mut edges = Vec::new();
    for ((i, j, c), &s) in scores.indexed_iter() {
        if i == j || s <= min_score || c >= RelationType::ALL.len() {
            continue;
        }
        if let (Some(&subject), Some(&object)) = (ids.get(i), ids.get(j)) {
            edges.push(RelationEdge::new(subject, RelationType::ALL[c], object).with_score(s));
        }
    }
    edges
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::{Array2, Array3};

    #[test]
    fn identity_and_annihilation() {
        let rel = Array3::from_shape_fn((3, 3, 8), |(i, j, c)| ((i * 31 + j * 7 + c) % 10) as f64 / 10.0);
        let ones = Array2::ones((3, 3));
        assert_eq!(fuse_auxiliary(rel.view(), ones.view()).unwrap(), rel);
        let zeros = Array2::zeros((3, 3));
        assert!(fuse_auxiliary(rel.view(), zeros.view()).unwrap().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn scalar_product() {
        let rel = Array3::from_elem((1, 1, 1), 0.8);
        let exist = Array2::from_elem((1, 1), 0.5);
        assert_eq!(fuse_auxiliary(rel.view(), exist.view()).unwrap()[[0, 0, 0]], 0.4);
    }

    #[test]
    fn shape_mismatch() {
        let rel = Array3::<f64>::zeros((2, 2, 8));
        let exist = Array2::<f64>::zeros((3, 2));
        assert!(matches!(fuse_auxiliary(rel.view(), exist.view()), Err(EvalError::ShapeMismatch { .. })));
    }

    #[test]
    fn edge_scores_scaled() {
        let mut edges = vec![RelationEdge::new(0, RelationType::Up, 1).with_score(0.8), RelationEdge::new(1, RelationType::Down, 0).with_score(0.6)];
        edges[0].existence = Some(0.5);
        fuse_edge_scores(&mut edges);
        assert_eq!(edges[0].score, Some(0.4));
        assert_eq!(edges[1].score, Some(0.6));
    }

    #[test]
    fn dense_round_trip() {
        let mut scores = Array3::<f64>::zeros((2, 2, 8));
        scores[[0, 1, RelationType::Parent.index()]] = 0.9;
        scores[[1, 1, 0]] = 1.0;
        let edges = dense_to_edges(&[10, 20], scores.view(), 0.0);
        assert_eq!(edges, vec![RelationEdge::new(10, RelationType::Parent, 20).with_score(0.9)]);
    }
}
