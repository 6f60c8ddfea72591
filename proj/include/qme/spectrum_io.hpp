// spectrum_io.hpp: JSON cache format for LiouvilleSpectrum
//
// {
//   "format": "qme-spectrum", "version": 1, "hilbert_dim": d,
//   "eigenvalues": [[re, im], ...],
//   "normalizers": [[re, im], ...],    // optional, recomputed as Tr(l_i^dag r_i) when absent
//   "right": [[[re, im], ...], ...],   // one column-stacked vec(r_i) per mode
//   "left":  [[[re, im], ...], ...]
// }

#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "qme/liouville.hpp"

namespace qme::io {

inline constexpr int kSpectrumFormatVersion = 1;

nlohmann::json spectrum_to_json(const liouville::LiouvilleSpectrum& spec);

// Throws std::invalid_argument on a malformed document or unknown version.
liouville::LiouvilleSpectrum spectrum_from_json(const nlohmann::json& j);

void save_spectrum(const liouville::LiouvilleSpectrum& spec, const std::filesystem::path& path);
liouville::LiouvilleSpectrum load_spectrum(const std::filesystem::path& path);

} // namespace qme::io
