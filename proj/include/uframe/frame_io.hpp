#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "uframe/frame.hpp"

namespace uframe {

/// {"n": int, "k": int, "vectors": [[real,...],...]} with n rows of k reals.
nlohmann::json frame_to_json(const Frame& f);
Frame frame_from_json(const nlohmann::json& j);

/// CSV: header "v1,...,vk", then n rows of k comma-separated reals.
std::string frame_to_csv(const Frame& f);
Frame frame_from_csv(std::istream& in);

/// Dispatches on the file extension (.json or .csv).
Frame read_frame(const std::string& path);
void write_frame(const std::string& path, const Frame& f);

}  // namespace uframe
