use qholo::stark::{stark_map, QuantumDefects, StarkModel};

fn main() {
    let fields: Vec<f64> = (0..45).map(|k| 1e-10 + 2.2e-7 * k as f64 / 44.0).collect();
    let model = StarkModel::new(14, 18, 0, QuantumDefects::rubidium(), fields.clone()).unwrap();
    let map = stark_map(&model).unwrap();
    let fi = 40;
    let i14 = map.labels.iter().position(|&l| l == (15, 14)).unwrap();
    // all states carrying (15,14) weight > 0.1
    let d = map.labels.len();
    let mut rows: Vec<(f64, usize, f64, f64)> = (0..d)
        .map(|s| {
            let w = map.vectors[fi][(i14, s)].powi(2);
            (w, s, map.energies[fi][s], map.z_expectation(fi, s))
        })
        .collect();
    rows.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    println!("states by (15,14) weight at E = {:.3e}:", map.fields[fi]);
    for (w, s, e, z) in rows.iter().take(5) {
        println!("  state {s}: w14 = {w:.4}, energy = {e:.6e}, <z> = {z:.2}");
    }
}
