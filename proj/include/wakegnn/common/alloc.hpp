#pragma once

namespace wakegnn {

/// Keeps large temporaries on the heap instead of fresh mmap/munmap pairs per
/// allocation. Training allocates and frees many n x hidden tensors per step,
/// which otherwise spends a large share of the time in page faults. No-op off glibc.
void tune_allocator();

}  // namespace wakegnn
