#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "field.hpp"
#include "matrix.hpp"
#include "pme.hpp"
#include "rod.hpp"

namespace pmaplab {

using json = nlohmann::ordered_json;

inline json field_to_json(const PrimeField& f) {
    return json{{"kind", "prime"}, {"modulus", std::to_string(f.modulus())}};
}
inline json field_to_json(const RationalField&) { return json{{"kind", "rational"}}; }

inline FieldSpec field_spec_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind")) throw FormatError("field must be an object with a kind");
    auto kind = j.at("kind").get<std::string>();
    if (kind == "rational") return FieldSpec::rational();
    if (kind != "prime") throw FormatError("unknown field kind '" + kind + "'");
    const json& m = j.at("modulus");
    std::uint64_t p = 0;
    try {
        p = m.is_string() ? std::stoull(m.get<std::string>()) : m.get<std::uint64_t>();
    } catch (const std::exception&) {
        throw FormatError("bad modulus");
    }
    return FieldSpec::prime(p);
}

namespace detail {

template <class F>
typename F::Elem elem_from_json(const F& f, const json& v) {
    if (v.is_string()) return f.parse(v.get<std::string>());
    if (v.is_number_integer()) return f.parse(v.dump());
    throw FormatError("matrix entries must be strings or integers");
}

template <class F>
json vec_to_json(const F& f, const std::vector<typename F::Elem>& v) {
    json out = json::array();
    for (const auto& x : v) out.push_back(f.to_string(x));
    return out;
}

template <class F>
std::vector<typename F::Elem> vec_from_json(const F& f, const json& j, int len) {
    if (!j.is_array() || static_cast<int>(j.size()) != len) throw FormatError("expected a vector of length " + std::to_string(len));
    std::vector<typename F::Elem> v;
    for (const auto& x : j) v.push_back(elem_from_json(f, x));
    return v;
}

template <class F>
json rows_to_json(const Matrix<F>& a) {
    json rows = json::array();
    for (int r = 0; r < a.n(); ++r) {
        json row = json::array();
        for (int c = 0; c < a.n(); ++c) row.push_back(a.field().to_string(a(r, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

template <class F>
Matrix<F> rows_from_json(const F& f, const json& rows, int n, IndexSet labels) {
    if (!rows.is_array() || static_cast<int>(rows.size()) != n) throw FormatError("rows must have n entries");
    Matrix<F> a(f, std::move(labels));
    for (int r = 0; r < n; ++r) {
        const json& row = rows[r];
        if (!row.is_array() || static_cast<int>(row.size()) != n) throw FormatError("row " + std::to_string(r) + " has wrong length");
        for (int c = 0; c < n; ++c) a(r, c) = elem_from_json(f, row[c]);
    }
    return a;
}

} // namespace detail

// "index" is written only when the labels differ from 0..n-1.
template <class F>
json matrix_to_json(const Matrix<F>& a) {
    json j;
    j["field"] = field_to_json(a.field());
    j["n"] = a.n();
    if (a.labels() != iota_set(a.n())) j["index"] = a.labels();
    j["rows"] = detail::rows_to_json(a);
    return j;
}

template <class F>
Matrix<F> matrix_from_json(const F& f, const json& j) {
    try {
        int n = j.at("n").get<int>();
        if (n < 1) throw FormatError("n must be positive");
        IndexSet labels = j.contains("index") ? j.at("index").get<IndexSet>() : iota_set(n);
        if (static_cast<int>(labels.size()) != n) throw FormatError("index has wrong length");
        return detail::rows_from_json(f, j.at("rows"), n, std::move(labels));
    } catch (const json::exception& e) {
        throw FormatError(e.what());
    } catch (const std::invalid_argument& e) {
        throw FormatError(e.what());
    }
}

template <class F>
json rod_to_json(const RodInstance<F>& inst) {
    json j;
    j["field"] = field_to_json(inst.field);
    j["n"] = inst.n;
    j["r"] = inst.r;
    j["B0"] = detail::rows_to_json(inst.B0);
    json r1 = json::array();
    for (int i = 0; i < inst.n; ++i)
        r1.push_back(json{{"u", detail::vec_to_json(inst.field, inst.u[i])}, {"v", detail::vec_to_json(inst.field, inst.v[i])}});
    j["rank1"] = std::move(r1);
    return j;
}

template <class F>
RodInstance<F> rod_from_json(const F& f, const json& j) {
    try {
        int n = j.at("n").get<int>(), r = j.at("r").get<int>();
        if (n < 1 || r < 1) throw FormatError("n and r must be positive");
        RodInstance<F> inst(f, n, r);
        inst.B0 = detail::rows_from_json(f, j.at("B0"), r, iota_set(r));
        const json& r1 = j.at("rank1");
        if (!r1.is_array() || static_cast<int>(r1.size()) != n) throw FormatError("rank1 must have n entries");
        for (int i = 0; i < n; ++i) {
            inst.u[i] = detail::vec_from_json(f, r1[i].at("u"), r);
            inst.v[i] = detail::vec_from_json(f, r1[i].at("v"), r);
        }
        return inst;
    } catch (const json::exception& e) {
        throw FormatError(e.what());
    }
}

inline json verdict_to_json(const PmeVerdict& v) {
    json j;
    j["equal"] = v.equal;
    j["method"] = method_name(v.method);
    j["samples"] = v.samples;
    j["witness"] = v.witness ? json(*v.witness) : json(nullptr);
    return j;
}

inline json parse_json_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw FormatError(e.what());
    }
}

} // namespace pmaplab
