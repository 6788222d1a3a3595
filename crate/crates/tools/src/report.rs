//! Order-dependence report for the procedural TAG.

use std::fmt::Write as _;

use phylotag::smithtag::{all_orders, compare_orders, OrderDependence};
use phylotag::{TreeCollection, TreeError, TreeId};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Orders to try: every permutation when there are at most `sample` of
/// them, otherwise the input order followed by `sample - 1` seeded random
/// shuffles.
pub fn sample_orders(k: usize, sample: usize, seed: u64) -> Vec<Vec<TreeId>> {
    let sample = sample.max(1);
    let fits = (1..=k).try_fold(1usize, |acc, i| acc.checked_mul(i).filter(|&f| f <= sample));
    if fits.is_some() {
        return all_orders(k);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let identity: Vec<TreeId> = (0..k).map(TreeId).collect();
    let mut orders = vec![identity.clone()];
    while orders.len() < sample {
        let mut order = identity.clone();
        order.shuffle(&mut rng);
        orders.push(order);
    }
    orders
}

/// Builds procedural TAGs over sampled orders and groups them by node set.
pub fn order_dependence_report(
    collection: &TreeCollection,
    sample: usize,
    seed: u64,
    post_process: bool,
) -> Result<OrderDependence, TreeError> {
    let orders = sample_orders(collection.len(), sample, seed);
    compare_orders(collection, &orders, post_process)
}

#[derive(Debug, Serialize)]
struct ReportJson {
    labels: Vec<String>,
    post_processed: bool,
    orders_tried: usize,
    distinct_node_sets: usize,
    differs_from_tag: bool,
    tag_nodes: Vec<Vec<String>>,
    groups: Vec<GroupJson>,
}

#[derive(Debug, Serialize)]
struct GroupJson {
    nodes: Vec<Vec<String>>,
    missing_from_tag: Vec<Vec<String>>,
    extra_over_tag: Vec<Vec<String>>,
    orders: Vec<Vec<usize>>,
    distinct_graphs: usize,
    matches_tag: bool,
}

fn names(report: &OrderDependence, bits: &phylotag::BitString) -> Vec<String> {
    report.space.decode(bits).map(String::from).collect()
}

pub fn report_to_json(report: &OrderDependence) -> String {
    let groups = report
        .groups
        .iter()
        .map(|g| GroupJson {
            nodes: g.nodes.iter().map(|b| names(report, b)).collect(),
            missing_from_tag: report
                .tag_nodes
                .iter()
                .filter(|b| !g.nodes.contains(b))
                .map(|b| names(report, b))
                .collect(),
            extra_over_tag: g
                .nodes
                .iter()
                .filter(|b| !report.tag_nodes.contains(b))
                .map(|b| names(report, b))
                .collect(),
            orders: g
                .orders
                .iter()
                .map(|o| o.iter().map(|t| t.0).collect())
                .collect(),
            distinct_graphs: g.distinct_graphs,
            matches_tag: g.matches_tag,
        })
        .collect();
    let out = ReportJson {
        labels: report.space.names().to_vec(),
        post_processed: report.post_processed,
        orders_tried: report.groups.iter().map(|g| g.orders.len()).sum(),
        distinct_node_sets: report.distinct_node_sets(),
        differs_from_tag: report.differs_from_tag(),
        tag_nodes: report.tag_nodes.iter().map(|b| names(report, b)).collect(),
        groups,
    };
    let mut s = serde_json::to_string_pretty(&out).expect("plain data serializes");
    s.push('\n');
    s
}

fn cluster(report: &OrderDependence, bits: &phylotag::BitString) -> String {
    format!("{{{}}}", names(report, bits).join(","))
}

pub fn report_to_text(report: &OrderDependence) -> String {
    let mut s = String::new();
    let tried: usize = report.groups.iter().map(|g| g.orders.len()).sum();
    let _ = writeln!(
        s,
        "orders tried: {tried}{}",
        if report.post_processed {
            " (post-processed)"
        } else {
            ""
        }
    );
    let _ = writeln!(s, "distinct node sets: {}", report.distinct_node_sets());
    let _ = writeln!(
        s,
        "differs from order-independent TAG: {}",
        if report.differs_from_tag() {
            "yes"
        } else {
            "no"
        }
    );
    for (i, g) in report.groups.iter().enumerate() {
        let _ = writeln!(
            s,
            "\ngroup {}: {} nodes, {} orders, {} distinct graphs{}",
            i + 1,
            g.nodes.len(),
            g.orders.len(),
            g.distinct_graphs,
            if g.matches_tag {
                ", same nodes as TAG"
            } else {
                ""
            }
        );
        let missing: Vec<String> = report
            .tag_nodes
            .iter()
            .filter(|b| !g.nodes.contains(b))
            .map(|b| cluster(report, b))
            .collect();
        let extra: Vec<String> = g
            .nodes
            .iter()
            .filter(|b| !report.tag_nodes.contains(b))
            .map(|b| cluster(report, b))
            .collect();
        if !missing.is_empty() {
            let _ = writeln!(s, "  missing: {}", missing.join(" "));
        }
        if !extra.is_empty() {
            let _ = writeln!(s, "  extra: {}", extra.join(" "));
        }
        for order in &g.orders {
            let ids: Vec<String> = order.iter().map(|t| t.0.to_string()).collect();
            let _ = writeln!(s, "  order {}", ids.join(" "));
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use phylotag::parse_newick;

    const THREE_TREES: &str = "((a,b,c),d);\n((a,b,d),c);\n((a,b),e);";

    #[test]
    fn all_orders_when_they_fit() {
        assert_eq!(sample_orders(3, 6, 0).len(), 6);
        assert_eq!(sample_orders(3, 100, 0).len(), 6);
        let few = sample_orders(4, 5, 9);
        assert_eq!(few.len(), 5);
        assert_eq!(few, sample_orders(4, 5, 9));
        assert_eq!(sample_orders(1, 1, 0), vec![vec![TreeId(0)]]);
    }

    #[test]
    fn three_trees_orders_disagree() {
        let c = parse_newick(THREE_TREES).unwrap();
        let r = order_dependence_report(&c, 6, 0, false).unwrap();
        assert!(r.distinct_node_sets() >= 2);
        let text = report_to_text(&r);
        assert!(text.contains("missing: {a,b}"), "{text}");
        let json: serde_json::Value = serde_json::from_str(&report_to_json(&r)).unwrap();
        assert_eq!(json["orders_tried"], 6);
    }

    #[test]
    fn common_leaf_set_has_one_node_set() {
        let c = parse_newick("((a,b),(c,d));\n(((a,b),c),d);\n((a,c),b,d);").unwrap();
        let r = order_dependence_report(&c, 24, 0, false).unwrap();
        assert_eq!(r.distinct_node_sets(), 1);
        assert!(!r.differs_from_tag());
    }
}
