#pragma once

/* JSON serialization for checker reports.  Field order is fixed and the
 * content depends only on the mathematical result, so reports are
 * byte-identical across runs and parallelism settings; wall time is opt-in
 * because it would break that. */

#include <json.hpp>

#include "rewrite.hpp"

namespace olie {

inline nlohmann::ordered_json to_json(const TraceStep& t) {
    nlohmann::ordered_json j;
    j["step"] = t.step;
    j["rule"] = t.rule;
    j["placement"] = t.placement;
    j["coefficient"] = t.coeff.str();
    j["leading_before"] = t.before.str();
    j["leading_after"] = t.after ? t.after->str() : "0";
    return j;
}

inline nlohmann::ordered_json to_json(const GSReport& r, bool with_timing = false,
                                      bool full_traces = false) {
    nlohmann::ordered_json j;
    j["family"] = r.family;
    j["order"] = kind_name(r.order);
    nlohmann::ordered_json b;
    b["max_deg"] = r.bounds.max_deg;
    b["max_odeg"] = r.bounds.max_odeg;
    b["max_dep"] = r.bounds.dep();
    b["ambient_deg_cap"] = r.bounds.ambient_deg_cap;
    if (r.parametric) b["alpha"] = r.param.str();
    j["bounds"] = b;
    j["instance_count"] = r.instance_count;
    nlohmann::ordered_json comps = nlohmann::ordered_json::array();
    for (const CompositionReport& c : r.compositions) {
        nlohmann::ordered_json cj;
        cj["kind"] = c.kind;
        cj["w"] = c.w;
        cj["f"] = c.f;
        cj["g"] = c.g;
        cj["trivial"] = c.trivial;
        cj["trace_len"] = c.steps;
        if (!c.trace.empty() && (!c.trivial || full_traces)) {
            nlohmann::ordered_json tj = nlohmann::ordered_json::array();
            for (const TraceStep& t : c.trace) tj.push_back(to_json(t));
            cj["trace"] = tj;
        }
        comps.push_back(cj);
    }
    j["compositions"] = comps;
    j["verdict"] = r.verdict;
    if (with_timing) j["elapsed_ms"] = r.elapsed_ms;
    return j;
}

inline nlohmann::ordered_json to_json(const CDReport& r) {
    nlohmann::ordered_json j;
    j["family"] = r.family;
    j["order"] = kind_name(r.order);
    j["max_deg"] = r.max_deg;
    j["slice_dim"] = r.slice_dim;
    j["irreducible"] = r.irreducible;
    j["rank"] = r.rank;
    j["balanced"] = r.balanced;
    return j;
}

}  // namespace olie
