#pragma once

// JSON for job configs, certificates and inline matrices.

#include <string>

#include "anosov/certifier.hpp"

namespace anosov::io {

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

certifier::JobConfig parse_config(const std::string& text);
certifier::JobConfig load_config(const std::string& path);
// Pretty-printed config that parse_config reads back unchanged.
std::string dump_config(const certifier::JobConfig& config);
// Compact, key-sorted form used for the digest.
std::string canonical_config(const certifier::JobConfig& config);
std::string sha256_hex(const std::string& data);

std::string dump_certificate(const certifier::Certificate& cert);

// Inline matrices/vectors: entries are numbers or [re, im] pairs.
Matrix parse_matrix(const std::string& text);
Vector parse_vector(const std::string& text);

}  // namespace anosov::io
