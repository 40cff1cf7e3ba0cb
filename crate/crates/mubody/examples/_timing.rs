fn main() {
    let filters = ["Id-route-*", "Id-scaling-*", "Id-polar-duality", "Id-V-diag", "Lem2.*", "Ineq-V-Minkowski",
                   "Prop3.1", "Prop3.2", "Prop3.5", "Prop4.*", "Thm4.4", "Thm4.5", "Thm4.6", "Thm4.7",
                   "Thm5.1", "Thm5.3", "Thm5.5*", "Cor*"];
    for f in filters {
        let config = mubody::verify::SuiteConfig {
            dims: vec![3], filters: vec![f.to_string()], ..Default::default()
        };
        let t0 = std::time::Instant::now();
        let report = mubody::verify::run_suite(&config).unwrap();
        println!("{:20} cases={:3} wall={:?}", f, report.summary.total, t0.elapsed());
    }
}
