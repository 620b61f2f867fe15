use asmlat::catalan_congruence::{all_depth_triangles, CatalanCongruence};

fn main() {
    for n in 3..=5 {
        for (di, d) in all_depth_triangles(n).unwrap().iter().enumerate() {
            let cong = CatalanCongruence::new(d).unwrap();
            let nonperm_bottoms = cong
                .all_class_masks()
                .into_iter()
                .filter(|&mask| cong.class_min(mask).unwrap().is_permutational().is_none())
                .count();
            println!("n={n} wall {di}: {nonperm_bottoms} nonperm bottoms");
        }
    }
}
