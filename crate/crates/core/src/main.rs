fn main() {
    if let Some(n) = std::env::var("FRACCALC_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    std::process::exit(fraccalc::cli::run(std::env::args_os()));
}
