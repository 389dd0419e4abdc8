/// `√φ` with `φ = (1 + √5)/2`: no Riesz constant below this value survives
/// the lune translation argument for the unit-area disk.
pub fn golden_threshold() -> f64 {
    ((1.0 + 5f64.sqrt()) / 2.0).sqrt()
}
