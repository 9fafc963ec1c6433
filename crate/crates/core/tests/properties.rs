mod common;

use std::collections::{BTreeMap, HashMap, HashSet};

use docrel::completion::annotate_detailed;
use docrel::eval::{average_precision, fuse_auxiliary, mean_ap_g, mean_recall_g, ScoredTriplet, Triplet};
use docrel::hierarchy::RoleGroup;
use docrel::io::{compute_stats, export_dataset_dot, export_dataset_graphml, parse_dataset, to_json_string};
use docrel::io::{Dataset, ExportOptions};
use docrel::model::{Category, InstanceId, Page, RelationEdge, RelationType};
use docrel::reading_order::reading_order;
use docrel::spatial::{extract_spatial, nearest_in_direction};
use docrel::{annotate, AnnotateConfig};
use ndarray::{Array2, Array3};
use proptest::prelude::*;

use common::*;

fn page_from(seed: u64, max_boxes: usize) -> Page {
    synthetic_page(&mut rng(seed), seed, max_boxes)
}

fn edge_set(page: &Page) -> Vec<(InstanceId, RelationType, InstanceId)> {
    let mut v: Vec<_> = extract_spatial(page).unwrap().iter().map(RelationEdge::triple).collect();
    v.sort();
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn spatial_matches_oracle(seed in any::<u64>()) {
        let page = page_from(seed, 50);
        prop_assert_eq!(edge_set(&page), brute_force_spatial(&page));
    }

    #[test]
    fn spatial_edges_point_the_right_way(seed in any::<u64>()) {
        let page = page_from(seed, 40);
        let bbox: HashMap<_, _> = page.instances.iter().map(|i| (i.id, i.bbox)).collect();
        let mut per_direction = HashSet::new();
        for (s, dir, o) in edge_set(&page) {
            prop_assert!(per_direction.insert((s, dir)));
            let (a, b) = (bbox[&s], bbox[&o]);
            let ok = match dir {
                RelationType::Down => b.top() >= a.bottom() && a.x_overlap(&b) > 0.0,
                RelationType::Up => b.bottom() <= a.top() && a.x_overlap(&b) > 0.0,
                RelationType::Right => b.left() >= a.right() && a.y_overlap(&b) > 0.0,
                RelationType::Left => b.right() <= a.left() && a.y_overlap(&b) > 0.0,
                _ => false,
            };
            prop_assert!(ok, "{} {:?} {}", s, dir, o);
        }
    }

    #[test]
    fn opposite_direction_is_no_farther(seed in any::<u64>()) {
        let page = page_from(seed, 40);
        for e in extract_spatial(&page).unwrap() {
            let back = match e.rel {
                RelationType::Right => RelationType::Left,
                RelationType::Left => RelationType::Right,
                RelationType::Up => RelationType::Down,
                _ => RelationType::Up,
            };
            let forward = nearest_in_direction(e.subject, &page, e.rel).unwrap().unwrap();
            let reverse = nearest_in_direction(e.object, &page, back).unwrap();
            prop_assert!(reverse.is_some_and(|r| r.edge_distance <= forward.edge_distance));
        }
    }

    #[test]
    fn translation_keeps_edges(seed in any::<u64>(), dx in 0u32..200, dy in 0u32..200) {
        let page = page_from(seed, 40);
        let mut moved = page.clone();
        moved.width += 200.0;
        moved.height += 200.0;
        for i in &mut moved.instances {
            i.bbox = i.bbox.translate(f64::from(dx), f64::from(dy));
        }
        prop_assert_eq!(edge_set(&page), edge_set(&moved));
        prop_assert_eq!(reading_order(&page, 0.0), reading_order(&moved, 0.0));
    }

    #[test]
    fn reading_order_is_a_deterministic_permutation(seed in any::<u64>(), gap in 0.0..30.0f64) {
        let page = page_from(seed, 50);
        let order = reading_order(&page, gap);
        prop_assert_eq!(&order, &reading_order(&page.clone(), gap));
        let mut got = order.order.clone();
        got.sort_unstable();
        let mut want: Vec<_> = page.instances.iter().map(|i| i.id).collect();
        want.sort_unstable();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn hierarchy_is_a_flat_section_forest(seed in any::<u64>()) {
        let page = page_from(seed, 50);
        let a = annotate_detailed(&page, &AnnotateConfig::default()).unwrap();
        let forest = &a.forest;
        prop_assert!(forest.is_acyclic());
        let category: HashMap<_, _> = page.instances.iter().map(|i| (i.id, i.category)).collect();
        for (child, parent) in &forest.parent_of {
            prop_assert!(RoleGroup::of(category[child]).in_hierarchy());
            prop_assert!(RoleGroup::of(category[parent]).in_hierarchy());
        }
        for link in &a.captions {
            prop_assert_eq!(forest.parent(link.caption), Some(link.container));
        }

        // Every unit hangs under the last Section-header read before it.
        let pos = a.order.positions();
        let paired: HashMap<_, _> = a.captions.iter().map(|l| (l.caption, l.container)).collect();
        let mut anchor: HashMap<InstanceId, usize> = HashMap::new();
        for (&cap, &container) in &paired {
            let e = anchor.entry(container).or_insert(pos[&container]);
            *e = (*e).min(pos[&cap]);
        }
        let headers: BTreeMap<usize, InstanceId> = page
            .instances
            .iter()
            .filter(|i| i.category == Category::SectionHeader)
            .map(|i| (pos[&i.id], i.id))
            .collect();
        for m in &forest.members {
            if paired.contains_key(m) || category[m] == Category::SectionHeader {
                continue;
            }
            let key = anchor.get(m).copied().unwrap_or(pos[m]);
            let expected = headers.range(..key).next_back().map(|(_, &h)| h);
            prop_assert_eq!(forest.parent(*m), expected);
        }
    }

    #[test]
    fn annotate_is_idempotent(seed in any::<u64>()) {
        let page = page_from(seed, 40);
        let config = AnnotateConfig::default();
        let once = annotate(&page, &config).unwrap().into_page();
        let twice = annotate(&once, &config).unwrap().into_page();
        prop_assert_eq!(once.relations, twice.relations);
    }

    #[test]
    fn ap_matches_exhaustive_oracle(hits in prop::collection::vec(any::<bool>(), 0..12), extra in 0usize..4) {
        let positives = hits.iter().filter(|h| **h).count() + extra;
        let ap = average_precision(&hits, positives);
        prop_assert!((0.0..=1.0).contains(&ap));
        prop_assert!((ap - exhaustive_ap(&hits, positives)).abs() < 1e-12);
    }

    #[test]
    fn graph_metrics_are_bounded(
        truth in prop::collection::hash_set((0u32..5, 0usize..8, 0u32..5), 0..15),
        guesses in prop::collection::vec((0u32..5, 0usize..8, 0u32..5, 0.0..=1.0f64), 0..20),
    ) {
        let g: Vec<Triplet> = truth
            .iter()
            .map(|&(s, r, o)| Triplet { page: 0, subject: s, predicate: RelationType::ALL[r], object: o })
            .collect();
        let x: Vec<ScoredTriplet> = guesses
            .iter()
            .map(|&(s, r, o, score)| ScoredTriplet { page: 0, subject: s, predicate: RelationType::ALL[r], object: o, score })
            .collect();
        for scores in [mean_recall_g(&x, &g), mean_ap_g(&x, &g)] {
            prop_assert!(scores.per_category.values().all(|v| (0.0..=1.0).contains(v)));
            prop_assert_eq!(scores.mean.is_none(), g.is_empty());
            prop_assert_eq!(scores.per_category.len() + scores.excluded.len(), RelationType::ALL.len());
        }
    }

    #[test]
    fn fusion_never_raises_a_score(n in 1usize..6, k in 1usize..9, seed in any::<u64>()) {
        use rand::Rng;
        let mut r = rng(seed);
        let rel = Array3::from_shape_fn((n, n, k), |_| r.gen::<f64>());
        let exist = Array2::from_shape_fn((n, n), |_| r.gen::<f64>());
        let fused = fuse_auxiliary(rel.view(), exist.view()).unwrap();
        for ((i, j, c), &v) in fused.indexed_iter() {
            prop_assert!(v <= rel[[i, j, c]].min(exist[[i, j]]));
            prop_assert_eq!(v, rel[[i, j, c]] * exist[[i, j]]);
        }
    }

    #[test]
    fn json_round_trip(seed in any::<u64>()) {
        let config = AnnotateConfig::default();
        let pages = (0..3).map(|i| annotate(&page_from(seed ^ i, 20), &config).unwrap().into_page()).collect();
        let ds = Dataset::new(pages);
        let back = parse_dataset(&to_json_string(&ds), "mem").unwrap();
        prop_assert!(back.warnings.is_empty());
        prop_assert_eq!(back.dataset, ds);
    }

    #[test]
    fn stats_agree_with_page_tallies(seed in any::<u64>()) {
        let config = AnnotateConfig::default();
        let pages: Vec<Page> = (0..4).map(|i| annotate(&page_from(seed ^ i, 30), &config).unwrap().into_page()).collect();
        let mut per_type: BTreeMap<RelationType, u64> = BTreeMap::new();
        for p in &pages {
            for e in &p.relations {
                *per_type.entry(e.rel).or_default() += 1;
            }
        }
        let total: u64 = per_type.values().sum();
        let spatial: u64 = per_type.iter().filter(|(r, _)| r.is_spatial()).map(|(_, c)| *c).sum();
        let stats = compute_stats(&Dataset::new(pages));
        prop_assert_eq!(stats.total_relations, total);
        prop_assert_eq!(stats.spatial_relations, spatial);
        prop_assert_eq!(stats.spatial_relations + stats.logical_relations, stats.total_relations);
        for (rel, count) in per_type {
            prop_assert_eq!(stats.per_type[&rel], count);
        }
    }

    #[test]
    fn export_is_deterministic(seed in any::<u64>()) {
        let page = annotate(&page_from(seed, 20), &AnnotateConfig::default()).unwrap().into_page();
        let ds = Dataset::new(vec![page]);
        let opts = ExportOptions::default();
        prop_assert_eq!(export_dataset_dot(&ds, &opts), export_dataset_dot(&ds.clone(), &opts));
        let gml = export_dataset_graphml(&ds, &opts);
        prop_assert_eq!(gml.matches("<edge ").count(), ds.pages[0].relations.len());
        prop_assert_eq!(gml.matches("<node ").count(), ds.pages[0].instances.len());
    }
}
