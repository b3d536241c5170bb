// Copyright 2026 The bandcorr Authors
// SPDX-License-Identifier: Apache-2.0

fn main() {
    std::process::exit(bandcorr::cli::run(std::env::args_os()));
}
