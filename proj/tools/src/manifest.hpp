#pragma once

#include <string>

namespace lab {

/// Hex SHA-1 of "blob <size>\0<content>", the object id git assigns to a file.
std::string git_blob_hash(const std::string& content);

}  // namespace lab
