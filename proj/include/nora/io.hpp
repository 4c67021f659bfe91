#ifndef NORA_IO_HPP_
#define NORA_IO_HPP_

#include <string>

namespace nora {

/// Write `content` to `path` atomically (temp file in the same directory,
/// then rename). Throws std::runtime_error on failure.
void atomic_write(const std::string& path, const std::string& content);

}  // namespace nora

#endif  // NORA_IO_HPP_
