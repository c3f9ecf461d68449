// Copyright 2026 The NBRDF Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include <nbrdf/cli.h>

int main(int argc, char **argv) { return nbrdf::cli::run(argc, argv); }
