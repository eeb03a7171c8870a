#pragma once

namespace gsparse {

/// Keeps freed heap blocks in the process instead of returning them to the
/// kernel after every tape pass. No-op outside glibc.
void configure_allocator();

} // namespace gsparse
