use regime_cli::config::CONFIG_ENV;

fn main() {
    let config_env = std::env::var_os(CONFIG_ENV);
    let code = regime_cli::run(
        std::env::args_os(),
        config_env.as_deref(),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    std::process::exit(code);
}
