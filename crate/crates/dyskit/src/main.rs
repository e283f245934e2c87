fn main() {
    // Restore default SIGPIPE handling so `dyskit ... | head` ends
    // quietly instead of panicking on the closed pipe.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    std::process::exit(dyskit::cli::run());
}
