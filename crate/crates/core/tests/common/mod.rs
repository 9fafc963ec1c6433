//! Shared generators and reference implementations for the integration tests.
//! The oracles here are deliberately naive and share no code with the library
//! beyond the data types.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};

use docrel::eval::InstanceMapping;
use docrel::model::{BoundingBox, Category, InstanceId, LayoutInstance, Page, PageId, RelationEdge, RelationType};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub const PAGE_W: f64 = 1000.0;
pub const PAGE_H: f64 = 1400.0;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn overlaps_any(b: &BoundingBox, placed: &[BoundingBox]) -> bool {
    placed.iter().any(|p| {
        let w = b.right().min(p.right()) - b.left().max(p.left());
        let h = b.bottom().min(p.bottom()) - b.top().max(p.top());
        w > 0.0 && h > 0.0
    })
}

/// Non-overlapping boxes dropped at random on integer coordinates, so equal
/// gaps and shared edges are common.
pub fn scattered_boxes(rng: &mut impl Rng, max_boxes: usize) -> Vec<BoundingBox> {
    let target = rng.gen_range(0..=max_boxes);
    let mut placed: Vec<BoundingBox> = Vec::new();
    let mut attempts = 0;
    while placed.len() < target && attempts < target * 40 {
        attempts += 1;
        let w = f64::from(rng.gen_range(1..=30u32) * 10);
        let h = f64::from(rng.gen_range(1..=12u32) * 10);
        let x = f64::from(rng.gen_range(0..=((PAGE_W - w) / 10.0) as u32) * 10);
        let y = f64::from(rng.gen_range(0..=((PAGE_H - h) / 10.0) as u32) * 10);
        let b = BoundingBox::new(x, y, w, h);
        if !overlaps_any(&b, &placed) {
            placed.push(b);
        }
    }
    placed
}

/// A column layout: optional full-width header band, then one to three
/// columns of stacked blocks with whitespace between them.
pub fn column_boxes(rng: &mut impl Rng, max_boxes: usize) -> Vec<BoundingBox> {
    let mut boxes = Vec::new();
    let mut y = 40.0;
    if rng.gen_bool(0.6) && max_boxes > 0 {
        boxes.push(BoundingBox::new(60.0, y, 880.0, 60.0));
        y += 80.0;
    }
    let cols = rng.gen_range(1..=3usize);
    let col_w = (880.0 - 20.0 * (cols as f64 - 1.0)) / cols as f64;
    for c in 0..cols {
        let x = 60.0 + c as f64 * (col_w + 20.0);
        let mut cy = y;
        while boxes.len() < max_boxes && rng.gen_bool(0.85) {
            let h = f64::from(rng.gen_range(2..=12u32) * 10);
            if cy + h > PAGE_H - 40.0 {
                break;
            }
            let indent = f64::from(rng.gen_range(0..=3u32) * 10);
            boxes.push(BoundingBox::new(x + indent, cy, col_w - indent, h));
            cy += h + f64::from(rng.gen_range(0..=3u32) * 10);
        }
    }
    boxes
}

const TEXTUAL: [Category; 8] = [
    Category::SectionHeader,
    Category::Text,
    Category::Text,
    Category::Text,
    Category::ListItem,
    Category::Formula,
    Category::Caption,
    Category::Footnote,
];

const OTHER: [Category; 5] =
    [Category::Table, Category::Picture, Category::PageHeader, Category::PageFooter, Category::Title];

fn pick_category(rng: &mut impl Rng) -> Category {
    if rng.gen_bool(0.75) {
        *TEXTUAL.choose(rng).unwrap()
    } else {
        *OTHER.choose(rng).unwrap()
    }
}

fn text_for(rng: &mut impl Rng, category: Category) -> Option<String> {
    let n = rng.gen_range(1..=3);
    let t = match category {
        Category::Table | Category::Picture => return None,
        Category::Caption => match rng.gen_range(0..4) {
            0 => format!("Table {n}: results"),
            1 => format!("Figure {n}. Overview"),
            2 => format!("Fig. {n} (cf. Table {})", rng.gen_range(1..=3)),
            _ => "Sample layout".to_owned(),
        },
        Category::Footnote => match rng.gen_range(0..3) {
            0 => format!("{n} See the appendix."),
            1 => "* Equal contribution.".to_owned(),
            _ => "Preprint.".to_owned(),
        },
        Category::SectionHeader => format!("{n} Method"),
        _ => match rng.gen_range(0..6) {
            0 => format!("as shown in Table {n} the"),
            1 => format!("see Figure {n} and Tab. {}", rng.gen_range(1..=3)),
            2 => format!("prior work{n} reports"),
            3 => "a claim* with a note".to_owned(),
            _ => "Plain running text.".to_owned(),
        },
    };
    Some(t)
}

/// A valid page with random categories and reference-bearing text.
pub fn synthetic_page(rng: &mut impl Rng, id: PageId, max_boxes: usize) -> Page {
    let boxes = if rng.gen_bool(0.5) { scattered_boxes(rng, max_boxes) } else { column_boxes(rng, max_boxes) };
    let mut ids: Vec<InstanceId> = (0..boxes.len() as InstanceId).map(|i| i * 3 + 1).collect();
    ids.shuffle(rng);
    let instances = boxes
        .into_iter()
        .zip(ids)
        .map(|(b, id)| {
            let category = pick_category(rng);
            let mut inst = LayoutInstance::new(id, category, b);
            inst.text = text_for(rng, category);
            inst
        })
        .collect();
    Page::new(id, PAGE_W, PAGE_H).with_instances(instances)
}

pub fn synthetic_corpus(seed: u64, pages: usize, max_boxes: usize) -> Vec<Page> {
    let mut r = rng(seed);
    (0..pages).map(|i| synthetic_page(&mut r, i as PageId, max_boxes)).collect()
}

/// O(n^2) nearest neighbor per direction straight from the definition.
pub fn brute_force_spatial(page: &Page) -> Vec<(InstanceId, RelationType, InstanceId)> {
    let mut out = Vec::new();
    for s in &page.instances {
        let a = s.bbox;
        for dir in RelationType::SPATIAL {
            let mut best: Option<(f64, f64, InstanceId)> = None;
            for o in &page.instances {
                if o.id == s.id {
                    continue;
                }
                let b = o.bbox;
                let x_ov = (a.x + a.w).min(b.x + b.w) - a.x.max(b.x);
                let y_ov = (a.y + a.h).min(b.y + b.h) - a.y.max(b.y);
                let (on_side, gap, ov) = match dir {
                    RelationType::Up => (b.y + b.h <= a.y, a.y - (b.y + b.h), x_ov),
                    RelationType::Down => (b.y >= a.y + a.h, b.y - (a.y + a.h), x_ov),
                    RelationType::Left => (b.x + b.w <= a.x, a.x - (b.x + b.w), y_ov),
                    RelationType::Right => (b.x >= a.x + a.w, b.x - (a.x + a.w), y_ov),
                    _ => unreachable!(),
                };
                if !on_side || ov <= 0.0 {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some((g, v, id)) => gap < g || (gap == g && (ov > v || (ov == v && o.id < id))),
                };
                if better {
                    best = Some((gap, ov, o.id));
                }
            }
            if let Some((_, _, id)) = best {
                out.push((s.id, dir, id));
            }
        }
    }
    out.sort();
    out
}

fn naive_iou(a: &BoundingBox, b: &BoundingBox) -> f64 {
    let w = (a.x + a.w).min(b.x + b.w) - a.x.max(b.x);
    let h = (a.y + a.h).min(b.y + b.h) - a.y.max(b.y);
    if w <= 0.0 || h <= 0.0 {
        return 0.0;
    }
    let inter = w * h;
    let area = |r: &BoundingBox| ((r.x + r.w) - r.x) * ((r.y + r.h) - r.y);
    inter / (area(a) + area(b) - inter)
}

/// Step 1 of the matching pseudocode, executed literally: for each
/// prediction i (score descending, id ascending), x = argmax over same-label
/// ground truth of IoU(x, i); if IoU(x, i) > T and (M[x] is empty or
/// IoU(x, i) > IoU(x, M[x])) then M[x] = i.
pub fn naive_match(gt: &Page, pred: &Page, t_iou: f64) -> InstanceMapping {
    let mut order: Vec<&LayoutInstance> = pred.instances.iter().collect();
    order.sort_by(|a, b| b.score.unwrap().partial_cmp(&a.score.unwrap()).unwrap().then(a.id.cmp(&b.id)));
    let mut gts: Vec<&LayoutInstance> = gt.instances.iter().collect();
    gts.sort_by_key(|g| g.id);
    let pred_box: HashMap<InstanceId, BoundingBox> = pred.instances.iter().map(|p| (p.id, p.bbox)).collect();

    let mut m: BTreeMap<InstanceId, InstanceId> = BTreeMap::new();
    for i in order {
        let mut x: Option<&LayoutInstance> = None;
        for g in &gts {
            if g.category != i.category {
                continue;
            }
            if x.is_none_or(|cur| naive_iou(&g.bbox, &i.bbox) > naive_iou(&cur.bbox, &i.bbox)) {
                x = Some(g);
            }
        }
        let Some(x) = x else { continue };
        let v = naive_iou(&x.bbox, &i.bbox);
        if v > t_iou {
            let free = match m.get(&x.id) {
                None => true,
                Some(held) => v > naive_iou(&x.bbox, &pred_box[held]),
            };
            if free {
                m.insert(x.id, i.id);
            }
        }
    }
    InstanceMapping::from_pairs(m)
}

/// All-points AP computed directly from its definition: each true positive
/// at rank k contributes 1/|G| times the best precision at any rank >= k.
pub fn exhaustive_ap(hits: &[bool], positives: usize) -> f64 {
    if positives == 0 {
        return 0.0;
    }
    let precision_at = |k: usize| hits[..=k].iter().filter(|h| **h).count() as f64 / (k + 1) as f64;
    (0..hits.len())
        .filter(|&k| hits[k])
        .map(|k| (k..hits.len()).map(precision_at).fold(0.0, f64::max) / positives as f64)
        .sum()
}

/// A noisy prediction of `gt`: boxes jittered, some dropped, some spurious,
/// scores on every instance and relation.
pub fn noisy_prediction(rng: &mut impl Rng, gt: &Page) -> Page {
    let mut instances = Vec::new();
    let mut id_map = HashMap::new();
    let mut next: InstanceId = 1000;
    for g in &gt.instances {
        if rng.gen_bool(0.1) {
            continue;
        }
        let j = |r: &mut dyn rand::RngCore, s: f64| s * (r.gen::<f64>() - 0.5);
        let b = g.bbox;
        let bbox = BoundingBox::new(
            (b.x + j(rng, b.w * 0.3)).max(0.0),
            (b.y + j(rng, b.h * 0.3)).max(0.0),
            b.w * (1.0 + j(rng, 0.4)),
            b.h * (1.0 + j(rng, 0.4)),
        );
        let category = if rng.gen_bool(0.1) { pick_category(rng) } else { g.category };
        id_map.insert(g.id, next);
        instances.push(LayoutInstance::new(next, category, bbox).with_score(rng.gen_range(0.05..1.0)));
        next += 1;
    }
    for _ in 0..rng.gen_range(0..3) {
        let b = BoundingBox::new(rng.gen_range(0.0..900.0), rng.gen_range(0.0..1300.0), 50.0, 40.0);
        instances.push(LayoutInstance::new(next, pick_category(rng), b).with_score(rng.gen_range(0.05..1.0)));
        next += 1;
    }
    let mut relations = Vec::new();
    for e in &gt.relations {
        if let (Some(&s), Some(&o)) = (id_map.get(&e.subject), id_map.get(&e.object)) {
            if rng.gen_bool(0.85) {
                relations.push(RelationEdge::new(s, e.rel, o).with_score(rng.gen_range(0.0..=1.0)));
            }
        }
    }
    let pred_ids: Vec<InstanceId> = instances.iter().map(|i| i.id).collect();
    for _ in 0..rng.gen_range(0..5) {
        if pred_ids.len() < 2 {
            break;
        }
        let s = *pred_ids.choose(rng).unwrap();
        let o = *pred_ids.choose(rng).unwrap();
        let rel = *RelationType::ALL.choose(rng).unwrap();
        if s != o && !relations.iter().any(|e: &RelationEdge| e.triple() == (s, rel, o)) {
            relations.push(RelationEdge::new(s, rel, o).with_score(rng.gen_range(0.0..=1.0)));
        }
    }
    Page::new(gt.id, gt.width, gt.height).with_instances(instances).with_relations(relations)
}

/// Same page with unit confidence on every instance and relation.
pub fn perfect_prediction(gt: &Page) -> Page {
    let mut p = gt.clone();
    p.instances.iter_mut().for_each(|i| i.score = Some(1.0));
    p.relations.iter_mut().for_each(|e| e.score = Some(1.0));
    p
}
