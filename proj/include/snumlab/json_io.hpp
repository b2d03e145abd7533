#pragma once

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "snumlab/algebra.hpp"
#include "snumlab/flags.hpp"
#include "snumlab/norms.hpp"
#include "snumlab/step_function.hpp"
#include "snumlab/young.hpp"

namespace snumlab {

using nlohmann::json;

// --- operator JSON ----------------------------------------------------------
//
// { "shape":  [ {"n": int, "w": number|"inf", "diffuse": bool}, ... ],
//   "blocks": [ {"re": [[...]], "im": [[...]]}, ... ] }

inline json shape_to_json(const AlgebraShape& shape) {
    json arr = json::array();
    for (const auto& b : shape.blocks) {
        json jb;
        jb["n"] = b.n;
        if (is_inf(b.weight)) jb["w"] = "inf";
        else jb["w"] = b.weight;
        jb["diffuse"] = b.diffuse;
        arr.push_back(std::move(jb));
    }
    return arr;
}

inline json operator_to_json(const BlockOperator& x) {
    json j;
    j["shape"] = shape_to_json(x.shape());
    json blocks = json::array();
    for (int k = 0; k < x.num_blocks(); ++k) {
        const Matrix& m = x.block(k);
        json re = json::array(), im = json::array();
        for (int i = 0; i < m.dim(); ++i) {
            json re_row = json::array(), im_row = json::array();
            for (int jj = 0; jj < m.dim(); ++jj) {
                re_row.push_back(m(i, jj).real());
                im_row.push_back(m(i, jj).imag());
            }
            re.push_back(std::move(re_row));
            im.push_back(std::move(im_row));
        }
        blocks.push_back(json{{"re", std::move(re)}, {"im", std::move(im)}});
    }
    j["blocks"] = std::move(blocks);
    return j;
}

inline double weight_from_json(const json& w) {
    if (w.is_string()) {
        if (w.get<std::string>() == "inf") return kInf;
        throw ParseError("weight must be a positive number or \"inf\"");
    }
    if (!w.is_number()) throw ParseError("weight must be a positive number or \"inf\"");
    return w.get<double>();
}

inline BlockOperator operator_from_json(const json& j) {
    if (!j.contains("shape") || !j.contains("blocks"))
        throw ParseError("operator JSON needs \"shape\" and \"blocks\"");

    AlgebraShape shape;
    for (const auto& jb : j.at("shape")) {
        BlockSpec spec;
        spec.n = jb.at("n").get<int>();
        spec.weight = weight_from_json(jb.at("w"));
        spec.diffuse = jb.value("diffuse", false);
        shape.blocks.push_back(spec);
    }
    if (!shape.valid()) throw ParseError("operator JSON has an invalid shape");

    std::vector<Matrix> blocks;
    const auto& jblocks = j.at("blocks");
    if (jblocks.size() != shape.blocks.size())
        throw ParseError("operator JSON: block count does not match shape");
    for (size_t k = 0; k < jblocks.size(); ++k) {
        const int n = shape.blocks[k].n;
        Matrix m(n);
        const auto& re = jblocks[k].at("re");
        if (static_cast<int>(re.size()) != n) throw ParseError("operator JSON: block row count mismatch");
        const bool has_im = jblocks[k].contains("im");
        try {
            for (int i = 0; i < n; ++i) {
                if (static_cast<int>(re.at(static_cast<size_t>(i)).size()) != n)
                    throw ParseError("operator JSON: block column count mismatch");
                for (int jj = 0; jj < n; ++jj) {
                    const double real =
                        re.at(static_cast<size_t>(i)).at(static_cast<size_t>(jj)).get<double>();
                    const double imag = has_im ? jblocks[k].at("im")
                                                     .at(static_cast<size_t>(i))
                                                     .at(static_cast<size_t>(jj))
                                                     .get<double>()
                                               : 0.0;
                    m(i, jj) = cplx(real, imag);
                }
            }
        } catch (const json::exception& e) {
            throw ParseError(std::string("operator JSON: malformed block entries: ") + e.what());
        }
        blocks.push_back(std::move(m));
    }
    return BlockOperator(std::move(shape), std::move(blocks));
}

// Parse a JSON document, reporting syntax errors with line and column.
inline json parse_json_text(const std::string& text, const std::string& origin) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        size_t line = 1, col = 1;
        const size_t stop = std::min(text.size(), e.byte > 0 ? e.byte - 1 : 0);
        for (size_t i = 0; i < stop; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ParseError(origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " +
                         e.what());
    }
}

inline json parse_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_json_text(buf.str(), path);
}

inline BlockOperator load_operator(const std::string& path) {
    return operator_from_json(parse_json_file(path));
}

// --- step function CSV: rows "s_start,s_end,level" --------------------------

inline std::string step_function_csv(const SingularValueFunction& f) {
    std::string out;
    double cum = 0.0;
    for (const Segment& seg : f.segments()) {
        const double end = is_inf(seg.width) ? kInf : cum + seg.width;
        out += format_number(cum) + "," + format_number(end) + "," + format_number(seg.level) + "\n";
        if (is_inf(seg.width)) break;
        cum = end;
    }
    return out;
}

inline json step_function_to_json(const SingularValueFunction& f) {
    json rows = json::array();
    double cum = 0.0;
    for (const Segment& seg : f.segments()) {
        json row;
        row["s_start"] = cum;
        if (is_inf(seg.width)) row["s_end"] = "inf";
        else row["s_end"] = cum + seg.width;
        row["level"] = seg.level;
        rows.push_back(std::move(row));
        if (is_inf(seg.width)) break;
        cum += seg.width;
    }
    return rows;
}

// --- gap report -------------------------------------------------------------

inline json gap_report_to_json(const GapReport& r) {
    json j;
    j["p"] = r.p;
    j["q"] = r.q;
    j["exchanged"] = r.exchanged;
    j["breakpoints"] = r.breakpoints;
    j["mu_ab"] = r.mu_ab;
    j["mu_D"] = r.mu_d;
    j["gap"] = r.gap;
    j["min_gap"] = r.min_gap;
    j["equality"] = r.equality;
    j["violation"] = r.violation;
    return j;
}

inline std::string gap_report_csv(const GapReport& r) {
    std::string out = "s,mu_ab,mu_D,gap\n";
    for (size_t i = 0; i < r.breakpoints.size(); ++i)
        out += format_number(r.breakpoints[i]) + "," + format_number(r.mu_ab[i]) + "," +
               format_number(r.mu_d[i]) + "," + format_number(r.gap[i]) + "\n";
    return out;
}

// --- flag dump CSV: rows "t_start,t_end,block,eigenindex,portion" -----------

inline std::string flag_csv(const CompleteFlag& flag) {
    std::string out;
    double cum = 0.0;
    for (const FlagAtom& a : flag.atoms()) {
        out += format_number(cum) + "," + format_number(cum + a.portion) + "," +
               std::to_string(a.block) + "," + std::to_string(a.index) + "," +
               format_number(a.portion) + "\n";
        cum += a.portion;
    }
    // The ambient diffuse zero block absorbs all remaining mass.
    out += format_number(cum) + ",inf,-1,0,inf\n";
    return out;
}

// --- equivalence report -----------------------------------------------------

inline json equivalence_report_to_json(const EquivalenceReport& r) {
    json j;
    j["norm"] = r.norm_name;
    j["power_identity"] = r.power_identity;
    j["compression_identity"] = r.compression_identity;
    j["norm_identity"] = r.norm_identity;
    j["mu_identity"] = r.mu_identity;
    j["agree"] = r.agree;
    j["residuals"] = {{"power", r.power_residual},
                      {"compression", r.compression_residual},
                      {"norm", r.norm_residual},
                      {"mu", r.mu_residual}};
    if (r.z && r.w)
        j["contractions"] = {{"z", operator_to_json(*r.z)}, {"w", operator_to_json(*r.w)}};
    return j;
}

}  // namespace snumlab
