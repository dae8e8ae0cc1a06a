#include "bfree/specfile.hpp"

#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <variant>
#include <vector>

namespace bfree {

namespace {

struct Value {
    std::variant<Int, std::string, std::vector<Int>> payload;
    long line = 0;
    bool used = false;
};

[[noreturn]] void fail(const std::string& source, long line, const std::string& message) {
    throw std::invalid_argument(source + (line > 0 ? ":" + std::to_string(line) : "") + ": " + message);
}

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

Int parse_int(const std::string& source, long line, const std::string& text) {
    const std::string t = trim(text);
    if (t.empty()) fail(source, line, "empty integer");
    std::size_t i = (t[0] == '-') ? 1 : 0;
    if (i == t.size()) fail(source, line, "'" + t + "' is not an integer");
    for (; i < t.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(t[i])))
            fail(source, line, "'" + t + "' is not an integer");
    return Int(t);
}

Value parse_value(const std::string& source, long line, const std::string& raw) {
    Value v;
    v.line = line;
    const std::string t = trim(raw);
    if (t.empty()) fail(source, line, "missing value");
    if (t.front() == '"') {
        if (t.size() < 2 || t.back() != '"') fail(source, line, "unterminated string");
        v.payload = t.substr(1, t.size() - 2);
    } else if (t.front() == '[') {
        if (t.back() != ']') fail(source, line, "unterminated list");
        std::vector<Int> items;
        const std::string body = t.substr(1, t.size() - 2);
        if (!trim(body).empty()) {
            std::stringstream ss(body);
            std::string item;
            while (std::getline(ss, item, ',')) items.push_back(parse_int(source, line, item));
        }
        v.payload = std::move(items);
    } else {
        v.payload = parse_int(source, line, t);
    }
    return v;
}

// Typed accessors over the raw key/value map: every fetched key is marked
// used so leftovers can be rejected at the end.
struct Document {
    std::string source;
    std::map<std::string, Value> entries;

    Value* find(const std::string& key) {
        auto it = entries.find(key);
        if (it == entries.end()) return nullptr;
        it->second.used = true;
        return &it->second;
    }

    std::optional<std::string> get_string(const std::string& key) {
        Value* v = find(key);
        if (!v) return std::nullopt;
        if (!std::holds_alternative<std::string>(v->payload))
            fail(source, v->line, "'" + key + "' must be a quoted string");
        return std::get<std::string>(v->payload);
    }

    std::optional<Int> get_int(const std::string& key) {
        Value* v = find(key);
        if (!v) return std::nullopt;
        if (!std::holds_alternative<Int>(v->payload))
            fail(source, v->line, "'" + key + "' must be an integer");
        return std::get<Int>(v->payload);
    }

    std::optional<long> get_long(const std::string& key) {
        auto v = get_int(key);
        if (!v) return std::nullopt;
        if (*v > std::numeric_limits<long>::max() || *v < std::numeric_limits<long>::min())
            fail(source, entries.at(key).line, "'" + key + "' is out of range");
        return v->convert_to<long>();
    }

    std::optional<std::vector<Int>> get_list(const std::string& key) {
        Value* v = find(key);
        if (!v) return std::nullopt;
        if (!std::holds_alternative<std::vector<Int>>(v->payload))
            fail(source, v->line, "'" + key + "' must be a list [a, b, ...]");
        return std::get<std::vector<Int>>(v->payload);
    }

    void reject_unused() const {
        for (const auto& [key, value] : entries)
            if (!value.used)
                fail(source, value.line, "key '" + key + "' is not consumed by this family");
    }
};

Document tokenize(const std::string& text, const std::string& source) {
    Document doc;
    doc.source = source;
    std::stringstream ss(text);
    std::string line;
    long line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        // strip a comment (quotes in this grammar never contain '#')
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) fail(source, line_no, "expected `key = value`");
        const std::string key = trim(t.substr(0, eq));
        if (key.empty()) fail(source, line_no, "missing key");
        if (doc.entries.count(key))
            fail(source, line_no, "duplicate key '" + key + "' (first on line " +
                                      std::to_string(doc.entries[key].line) + ")");
        doc.entries.emplace(key, parse_value(source, line_no, t.substr(eq + 1)));
    }
    return doc;
}

Rat parse_rational(const std::string& source, long line, const std::string& text) {
    const auto slash = text.find('/');
    if (slash == std::string::npos) return Rat(parse_int(source, line, text));
    const Int num = parse_int(source, line, text.substr(0, slash));
    const Int den = parse_int(source, line, text.substr(slash + 1));
    if (den == 0) fail(source, line, "rational with zero denominator");
    return Rat(num, den);
}

LoadedSpec build_direct(Document& doc, ToeplitzKind kind, const std::string& fallback_name) {
    LoadedSpec out;
    out.direct = true;
    out.toeplitz.kind = kind;
    out.name = doc.get_string("name").value_or(fallback_name);
    out.toeplitz.name = out.name;

    if (kind == ToeplitzKind::skeleton) {
        for (long k = 1;; ++k) {
            const std::string prefix = "level." + std::to_string(k) + ".";
            const auto p = doc.get_int(prefix + "p");
            const auto holes = doc.get_list(prefix + "holes");
            const auto fill = doc.get_string(prefix + "fill");
            if (!p && !holes && !fill) break;
            if (!p) fail(doc.source, 0, "level " + std::to_string(k) + " needs '" + prefix + "p'");
            if (!fill) fail(doc.source, 0, "level " + std::to_string(k) + " needs '" + prefix + "fill'");
            SkeletonLevel lvl;
            lvl.p = *p;
            lvl.holes = holes.value_or(std::vector<Int>{});
            lvl.fill = *fill;
            out.toeplitz.levels.push_back(std::move(lvl));
        }
        if (out.toeplitz.levels.empty())
            fail(doc.source, 0, "a skeleton needs at least one `level.1.*` group");
    }
    doc.reject_unused();
    validate_direct_spec(out.toeplitz);
    return out;
}

LoadedSpec build_bset(Document& doc, Family family, const std::string& fallback_name) {
    LoadedSpec out;
    out.bset.family = family;
    out.name = doc.get_string("name").value_or(fallback_name);
    out.bset.name = out.name;

    const auto horizon = doc.get_long("horizon");
    if (!horizon) fail(doc.source, 0, "missing required key 'horizon'");
    out.bset.horizon = *horizon;
    out.bset.window = doc.get_long("window").value_or(1000);

    auto require_list = [&](const char* key) {
        auto v = doc.get_list(key);
        if (!v) fail(doc.source, 0, std::string("family ") + family_name(family) +
                                        " needs the list '" + key + "'");
        return *v;
    };

    switch (family) {
        case Family::Explicit:
            out.bset.explicit_b = require_list("params.b");
            break;
        case Family::B1:
            out.bset.c = require_list("params.c");
            break;
        case Family::B1Cut: {
            out.bset.c = require_list("params.c");
            if (Value* n = doc.find("params.N")) {
                if (std::holds_alternative<std::string>(n->payload)) {
                    if (std::get<std::string>(n->payload) != "inf")
                        fail(doc.source, n->line, "'params.N' must be an integer or \"inf\"");
                    out.bset.cutoff = -1;
                } else if (std::holds_alternative<Int>(n->payload)) {
                    out.bset.cutoff = std::get<Int>(n->payload).convert_to<long>();
                } else {
                    fail(doc.source, n->line, "'params.N' must be an integer or \"inf\"");
                }
            }
            break;
        }
        case Family::B2:
            out.bset.c = require_list("params.c");
            out.bset.d = doc.get_list("params.d").value_or(std::vector<Int>{});
            break;
        case Family::ProductChain:
            out.bset.c = require_list("params.c");
            out.bset.q = require_list("params.q");
            break;
        case Family::TwoFiltrations:
            out.bset.c = require_list("params.c");
            out.bset.d = require_list("params.d");
            out.bset.q = require_list("params.q");
            break;
    }

    if (Value* tail = doc.find("tail_bound")) {
        if (std::holds_alternative<std::string>(tail->payload))
            out.tail_bound = parse_rational(doc.source, tail->line, std::get<std::string>(tail->payload));
        else if (std::holds_alternative<Int>(tail->payload))
            out.tail_bound = Rat(std::get<Int>(tail->payload));
        else
            fail(doc.source, tail->line, "'tail_bound' must be \"a/b\" or an integer");
    }

    doc.reject_unused();
    validate_spec(out.bset);
    return out;
}

}  // namespace

LoadedSpec parse_spec_text(const std::string& text, const std::string& source_name) {
    Document doc = tokenize(text, source_name);
    const auto family = doc.get_string("family");
    if (!family) fail(source_name, 0, "missing required key 'family'");

    if (*family == "gh_variant") return build_direct(doc, ToeplitzKind::gh_variant, source_name);
    if (*family == "skeleton") return build_direct(doc, ToeplitzKind::skeleton, source_name);

    for (Family f : {Family::Explicit, Family::B1, Family::B1Cut, Family::B2, Family::ProductChain,
                     Family::TwoFiltrations})
        if (*family == family_name(f)) return build_bset(doc, f, source_name);

    fail(source_name, doc.entries.at("family").line, "unknown family '" + *family + "'");
}

LoadedSpec load_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open spec file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_spec_text(buffer.str(), std::filesystem::path(path).stem().string());
}

std::string bundled_spec_dir() {
    if (const char* env = std::getenv("BFREE_SPEC_DIR")) return env;
#ifdef BFREE_SPEC_DIR
    return BFREE_SPEC_DIR;
#else
    return "specs";
#endif
}

}  // namespace bfree
