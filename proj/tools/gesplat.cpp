// Copyright (c) 2026 The gesplat Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdio>

int main(int, char**) {
    std::puts("gesplat: commands not wired up yet");
    return 0;
}
