//! Multiplying per-class relation scores by a relation existence score,
//! on dense arrays and on edge lists.
//!
//! cargo run --example fuse_scores

use docrel::eval::{dense_to_edges, fuse_auxiliary, fuse_edge_scores};
use docrel::model::{RelationEdge, RelationType};
use ndarray::{Array2, Array3};

fn main() {
    let n = 3;
    let mut rel = Array3::<f64>::zeros((n, n, RelationType::ALL.len()));
    rel[[0, 1, RelationType::Parent.index()]] = 0.8;
    rel[[1, 0, RelationType::Child.index()]] = 0.9;
    rel[[1, 2, RelationType::Sequence.index()]] = 0.7;

    let mut exist = Array2::<f64>::zeros((n, n));
    exist[[0, 1]] = 0.5;
    exist[[1, 0]] = 0.95;
    exist[[1, 2]] = 0.2;

    let fused = fuse_auxiliary(rel.view(), exist.view()).expect("shapes agree");
    for e in dense_to_edges(&[10, 11, 12], fused.view(), 0.0) {
        println!("{} -{}-> {}  {:.3}", e.subject, e.rel, e.object, e.score.unwrap());
    }

    let mut edges = vec![RelationEdge::new(10, RelationType::Parent, 11).with_score(0.8)];
    edges[0].existence = Some(0.5);
    fuse_edge_scores(&mut edges);
    println!("edge form: {:.3}", edges[0].score.unwrap());
}
