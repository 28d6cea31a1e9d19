#include <lll/event_model.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <limits>
#include <sstream>

namespace lll {

namespace {

using nlohmann::json;

void check_var(int var, int n, const char* what) {
    if (var < 0 || var >= n) {
        throw InvalidModel(std::string(what) + ": variable " + std::to_string(var) + " out of range");
    }
}

}  // namespace

bool VariableDomain::has_value(int value) const {
    return index_of(value) >= 0;
}

int VariableDomain::index_of(int value) const {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i].value == value) return static_cast<int>(i);
    }
    return -1;
}

const Rational& VariableDomain::prob_of(int value) const {
    int idx = index_of(value);
    if (idx < 0) throw InvalidModel("value id " + std::to_string(value) + " not in domain");
    return values[static_cast<std::size_t>(idx)].prob;
}

bool EventSystem::dependent(int a, int b) const {
    if (a == b) return true;
    const auto& sa = event(a).scope;
    const auto& sb = event(b).scope;
    std::size_t i = 0, j = 0;
    while (i < sa.size() && j < sb.size()) {
        if (sa[i] == sb[j]) return true;
        if (sa[i] < sb[j]) ++i; else ++j;
    }
    return false;
}

int EventSystem::max_degree() const {
    std::size_t d = 0;
    for (const auto& nb : neighbors_) d = std::max(d, nb.size());
    return static_cast<int>(d);
}

Rational EventSystem::max_prob() const {
    Rational p = 0;
    for (const auto& ev : events_) p = std::max(p, ev.prob);
    return p;
}

bool EventSystem::all_atomic() const {
    return std::all_of(events_.begin(), events_.end(),
                       [](const BadEvent& ev) { return ev.kind == EventKind::atomic; });
}

bool EventSystem::evaluate(int b, const Assignment& x) const {
    if (x.size() != variable_count()) throw InvalidModel("assignment size does not match variable count");
    return evaluate_with(b, [&](int var) { return x[var]; });
}

std::vector<int> EventSystem::true_events(const Assignment& x) const {
    std::vector<int> out;
    for (int b = 0; b < event_count(); ++b) {
        if (evaluate(b, x)) out.push_back(b);
    }
    return out;
}

int EventSystem::sample_value(int var, std::uint64_t word) const {
    const auto& th = sample_thresholds(var);
    const auto& dom = domain(var);
    for (std::size_t j = 0; j < th.size(); ++j) {
        if (word < th[j]) return dom.values[j].value;
    }
    return dom.values.back().value;
}

EventSystemBuilder::EventSystemBuilder(int variable_count) : n_(variable_count) {
    if (variable_count < 0) throw InvalidModel("negative variable count");
    domains_.resize(static_cast<std::size_t>(variable_count));
    domain_set_.resize(static_cast<std::size_t>(variable_count), false);
}

EventSystemBuilder& EventSystemBuilder::set_domain(int var, std::vector<DomainValue> values) {
    check_var(var, n_, "set_domain");
    if (values.empty()) throw InvalidModel("domain must have at least one value");
    Rational sum = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i].prob.get_den() == 0) throw InvalidModel("zero denominator in probability");
        values[i].prob.canonicalize();
        if (values[i].prob <= 0 || values[i].prob > 1) {
            throw InvalidModel("value probability must lie in (0,1]");
        }
        for (std::size_t j = i + 1; j < values.size(); ++j) {
            if (values[i].value == values[j].value) throw InvalidModel("duplicate value id in domain");
        }
        sum += values[i].prob;
    }
    if (sum != 1) throw InvalidModel("domain probabilities must sum to exactly 1");
    domains_[static_cast<std::size_t>(var)] = VariableDomain{std::move(values)};
    domain_set_[static_cast<std::size_t>(var)] = true;
    return *this;
}

EventSystemBuilder& EventSystemBuilder::uniform_boolean() {
    for (int v = 0; v < n_; ++v) {
        set_domain(v, {{0, Rational(1, 2)}, {1, Rational(1, 2)}});
    }
    return *this;
}

EventSystemBuilder& EventSystemBuilder::add_atomic(std::vector<std::pair<int, int>> assignment) {
    if (assignment.empty()) throw InvalidModel("atomic event needs at least one literal");
    std::sort(assignment.begin(), assignment.end());
    for (std::size_t i = 0; i + 1 < assignment.size(); ++i) {
        if (assignment[i].first == assignment[i + 1].first) {
            throw InvalidModel("duplicate variable in atomic assignment");
        }
    }
    BadEvent ev;
    ev.kind = EventKind::atomic;
    for (const auto& [var, val] : assignment) {
        check_var(var, n_, "add_atomic");
        ev.scope.push_back(var);
    }
    ev.assignment = std::move(assignment);
    events_.push_back(std::move(ev));
    return *this;
}

EventSystemBuilder& EventSystemBuilder::add_opaque(std::vector<int> scope, OpaquePredicate predicate,
                                                   Rational prob) {
    if (scope.empty()) throw InvalidModel("opaque event needs a non-empty scope");
    if (!predicate) throw InvalidModel("opaque event needs a predicate");
    if (prob.get_den() == 0) throw InvalidModel("zero denominator in probability");
    prob.canonicalize();
    if (prob < 0 || prob > 1) throw InvalidModel("opaque event probability must lie in [0,1]");
    std::sort(scope.begin(), scope.end());
    if (std::adjacent_find(scope.begin(), scope.end()) != scope.end()) {
        throw InvalidModel("duplicate variable in opaque scope");
    }
    for (int var : scope) check_var(var, n_, "add_opaque");
    BadEvent ev;
    ev.kind = EventKind::opaque;
    ev.scope = std::move(scope);
    ev.predicate = std::move(predicate);
    ev.prob = std::move(prob);
    events_.push_back(std::move(ev));
    return *this;
}

EventSystem EventSystemBuilder::build() {
    for (int v = 0; v < n_; ++v) {
        if (!domain_set_[static_cast<std::size_t>(v)]) {
            throw InvalidModel("variable " + std::to_string(v) + " has no domain");
        }
    }
    EventSystem sys;
    sys.domains_ = std::move(domains_);

    for (BadEvent& ev : events_) {
        if (ev.kind == EventKind::atomic) {
            Rational p = 1;
            for (const auto& [var, val] : ev.assignment) {
                p *= sys.domains_[static_cast<std::size_t>(var)].prob_of(val);
            }
            ev.prob = std::move(p);
        }
        if (ev.prob == 0) continue;  // can never occur
        sys.events_.push_back(std::move(ev));
    }

    // Inclusive neighborhoods via per-variable occurrence lists.
    int n = sys.variable_count();
    int m = sys.event_count();
    std::vector<std::vector<int>> by_var(static_cast<std::size_t>(n));
    for (int b = 0; b < m; ++b) {
        for (int var : sys.events_[static_cast<std::size_t>(b)].scope) {
            by_var[static_cast<std::size_t>(var)].push_back(b);
        }
    }
    sys.neighbors_.resize(static_cast<std::size_t>(m));
    for (int b = 0; b < m; ++b) {
        std::vector<int>& nb = sys.neighbors_[static_cast<std::size_t>(b)];
        for (int var : sys.events_[static_cast<std::size_t>(b)].scope) {
            const auto& occ = by_var[static_cast<std::size_t>(var)];
            nb.insert(nb.end(), occ.begin(), occ.end());
        }
        std::sort(nb.begin(), nb.end());
        nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    }

    // 64-bit cumulative sampling windows, rounded up exactly.
    sys.thresholds_.resize(static_cast<std::size_t>(n));
    mpz_class two64 = mpz_class(1) << 64;
    for (int v = 0; v < n; ++v) {
        const auto& dom = sys.domains_[static_cast<std::size_t>(v)];
        auto& th = sys.thresholds_[static_cast<std::size_t>(v)];
        Rational cum = 0;
        for (std::size_t j = 0; j + 1 < dom.values.size(); ++j) {
            cum += dom.values[j].prob;
            mpz_class scaled;
            mpz_cdiv_q(scaled.get_mpz_t(), mpz_class(cum.get_num() * two64).get_mpz_t(),
                       cum.get_den().get_mpz_t());
            th.push_back(scaled.fits_ulong_p() ? scaled.get_ui()
                                               : std::numeric_limits<std::uint64_t>::max());
        }
    }
    return sys;
}

EventSystem parse_dimacs(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string tok;
    long n = -1, m = -1;
    while (in >> tok) {
        if (tok == "c") {
            std::string rest;
            std::getline(in, rest);
            continue;
        }
        if (tok == "p") {
            std::string fmt;
            if (!(in >> fmt) || fmt != "cnf" || !(in >> n >> m) || n < 0 || m < 0) {
                throw ParseError("malformed DIMACS problem line");
            }
            break;
        }
        throw ParseError("unexpected token before DIMACS problem line: " + tok);
    }
    if (n < 0) throw ParseError("missing DIMACS problem line");

    EventSystemBuilder builder(static_cast<int>(n));
    builder.uniform_boolean();

    long clauses = 0;
    std::vector<std::pair<int, int>> lits;  // (0-based var, falsifying value)
    bool tautological = false;
    long lit;
    while (in >> tok) {
        if (tok == "c") {
            std::string rest;
            std::getline(in, rest);
            continue;
        }
        std::size_t used = 0;
        try {
            lit = std::stol(tok, &used);
        } catch (const std::exception&) {
            throw ParseError("bad literal in DIMACS clause: " + tok);
        }
        if (used != tok.size()) throw ParseError("bad literal in DIMACS clause: " + tok);
        if (lit == 0) {
            if (lits.empty() && !tautological) throw ParseError("empty clause is unsatisfiable");
            ++clauses;
            if (!tautological) builder.add_atomic(lits);
            lits.clear();
            tautological = false;
            continue;
        }
        long var = lit > 0 ? lit : -lit;
        if (var > n) throw ParseError("literal out of range: " + tok);
        std::pair<int, int> entry{static_cast<int>(var - 1), lit > 0 ? 0 : 1};
        bool dup = false;
        for (const auto& e : lits) {
            if (e.first == entry.first) {
                dup = true;
                if (e.second != entry.second) tautological = true;  // x and !x: never false
            }
        }
        if (!dup) lits.push_back(entry);
    }
    if (!lits.empty() || tautological) throw ParseError("unterminated DIMACS clause");
    if (clauses != m) {
        throw ParseError("clause count mismatch: header says " + std::to_string(m) + ", found " +
                         std::to_string(clauses));
    }
    return builder.build();
}

EventSystem parse_native(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad model JSON: ") + e.what());
    }
    try {
        if (!doc.is_object() || !doc.contains("variables") || !doc.contains("events")) {
            throw ParseError("model JSON needs 'variables' and 'events'");
        }
        const json& vars = doc.at("variables");
        const json& events = doc.at("events");
        if (!vars.is_array() || !events.is_array()) throw ParseError("'variables'/'events' must be arrays");

        int n = static_cast<int>(vars.size());
        std::vector<const json*> by_id(static_cast<std::size_t>(n), nullptr);
        for (const json& v : vars) {
            long id = v.at("id").get<long>();
            if (id < 1 || id > n) throw InvalidModel("variable ids must be 1..n, got " + std::to_string(id));
            if (by_id[static_cast<std::size_t>(id - 1)]) throw InvalidModel("duplicate variable id");
            by_id[static_cast<std::size_t>(id - 1)] = &v;
        }
        EventSystemBuilder builder(n);
        for (int i = 0; i < n; ++i) {
            if (!by_id[static_cast<std::size_t>(i)]) {
                throw InvalidModel("missing variable id " + std::to_string(i + 1));
            }
            std::vector<DomainValue> dom;
            for (const json& val : by_id[static_cast<std::size_t>(i)]->at("values")) {
                dom.push_back({val.at("v").get<int>(), parse_rational(val.at("prob").get<std::string>())});
            }
            builder.set_domain(i, std::move(dom));
        }
        int mcount = static_cast<int>(events.size());
        std::vector<const json*> ev_by_id(static_cast<std::size_t>(mcount), nullptr);
        for (const json& ev : events) {
            long id = ev.at("id").get<long>();
            if (id < 1 || id > mcount) throw InvalidModel("event ids must be 1..m, got " + std::to_string(id));
            if (ev_by_id[static_cast<std::size_t>(id - 1)]) throw InvalidModel("duplicate event id");
            ev_by_id[static_cast<std::size_t>(id - 1)] = &ev;
        }
        for (int i = 0; i < mcount; ++i) {
            const json& ev = *ev_by_id[static_cast<std::size_t>(i)];
            std::string kind = ev.at("kind").get<std::string>();
            if (kind != "atomic") {
                throw InvalidModel("only atomic events can be loaded from JSON, got kind '" + kind + "'");
            }
            std::vector<std::pair<int, int>> assignment;
            for (const json& lit : ev.at("assignment")) {
                if (!lit.is_array() || lit.size() != 2) throw InvalidModel("assignment entries are [var,val]");
                assignment.emplace_back(lit.at(0).get<int>() - 1, lit.at(1).get<int>());
            }
            builder.add_atomic(std::move(assignment));
        }
        return builder.build();
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad model JSON: ") + e.what());
    }
}

std::string serialize_native(const EventSystem& sys) {
    json vars = json::array();
    for (int v = 0; v < sys.variable_count(); ++v) {
        json vals = json::array();
        for (const DomainValue& dv : sys.domain(v).values) {
            vals.push_back({{"v", dv.value}, {"prob", rational_str(dv.prob)}});
        }
        vars.push_back({{"id", v + 1}, {"values", std::move(vals)}});
    }
    json events = json::array();
    for (int b = 0; b < sys.event_count(); ++b) {
        const BadEvent& ev = sys.event(b);
        if (ev.kind != EventKind::atomic) {
            throw InvalidModel("opaque events cannot be serialized to model JSON");
        }
        json lits = json::array();
        for (const auto& [var, val] : ev.assignment) lits.push_back({var + 1, val});
        events.push_back({{"id", b + 1}, {"kind", "atomic"}, {"assignment", std::move(lits)}});
    }
    return json{{"variables", std::move(vars)}, {"events", std::move(events)}}.dump(2);
}

}  // namespace lll
