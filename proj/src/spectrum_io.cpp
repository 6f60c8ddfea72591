// spectrum_io.cpp: JSON (de)serialisation of Liouvillian spectra

#include "qme/spectrum_io.hpp"

#include <fstream>
#include <stdexcept>

namespace qme::io {

using nlohmann::json;

namespace {

json complex_pair(cplx z) { return json::array({z.real(), z.imag()}); }

cplx parse_pair(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw std::invalid_argument("spectrum json: expected [re, im] pair");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

json columns_to_json(const ComplexMatrix& m) {
    json out = json::array();
    for (Index k = 0; k < m.cols(); ++k) {
        json col = json::array();
        for (Index i = 0; i < m.rows(); ++i) col.push_back(complex_pair(m(i, k)));
        out.push_back(std::move(col));
    }
    return out;
}

ComplexMatrix columns_from_json(const json& j, Index n) {
    if (!j.is_array() || static_cast<Index>(j.size()) != n) {
        throw std::invalid_argument("spectrum json: eigenvector list has wrong length");
    }
    ComplexMatrix m(n, n);
    for (Index k = 0; k < n; ++k) {
        const json& col = j[static_cast<std::size_t>(k)];
        if (!col.is_array() || static_cast<Index>(col.size()) != n) {
            throw std::invalid_argument("spectrum json: eigenvector has wrong length");
        }
        for (Index i = 0; i < n; ++i) m(i, k) = parse_pair(col[static_cast<std::size_t>(i)]);
    }
    return m;
}

} // namespace

json spectrum_to_json(const liouville::LiouvilleSpectrum& spec) {
    json ev = json::array();
    json norms = json::array();
    for (Index i = 0; i < spec.size(); ++i) {
        ev.push_back(complex_pair(spec.eigenvalue(i)));
        norms.push_back(complex_pair(spec.normalizers()(i)));
    }
    return json{{"format", "qme-spectrum"},
                {"version", kSpectrumFormatVersion},
                {"hilbert_dim", spec.hilbert_dim()},
                {"eigenvalues", std::move(ev)},
                {"normalizers", std::move(norms)},
                {"right", columns_to_json(spec.right_vectors())},
                {"left", columns_to_json(spec.left_vectors())}};
}

liouville::LiouvilleSpectrum spectrum_from_json(const json& j) {
    if (!j.is_object() || j.value("format", "") != "qme-spectrum") {
        throw std::invalid_argument("spectrum json: not a qme-spectrum document");
    }
    if (j.value("version", -1) != kSpectrumFormatVersion) {
        throw std::invalid_argument("spectrum json: unsupported version");
    }
    const json& ev = j.at("eigenvalues");
    const auto n = static_cast<Index>(ev.size());
    const auto d = j.at("hilbert_dim").get<Index>();
    if (d * d != n) throw std::invalid_argument("spectrum json: hilbert_dim does not match mode count");
    ComplexVector lambda(n);
    for (Index i = 0; i < n; ++i) lambda(i) = parse_pair(ev[static_cast<std::size_t>(i)]);
    ComplexVector norms;
    if (j.contains("normalizers")) {
        const json& kj = j.at("normalizers");
        if (!kj.is_array() || static_cast<Index>(kj.size()) != n) {
            throw std::invalid_argument("spectrum json: normalizers have wrong length");
        }
        norms.resize(n);
        for (Index i = 0; i < n; ++i) norms(i) = parse_pair(kj[static_cast<std::size_t>(i)]);
    }
    return liouville::LiouvilleSpectrum(std::move(lambda), columns_from_json(j.at("right"), n),
                                        columns_from_json(j.at("left"), n), std::move(norms));
}

void save_spectrum(const liouville::LiouvilleSpectrum& spec, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << spectrum_to_json(spec).dump() << '\n';
}

liouville::LiouvilleSpectrum load_spectrum(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return spectrum_from_json(json::parse(in));
}

} // namespace qme::io
