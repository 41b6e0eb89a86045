#include "amtk/io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace amtk {

using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ModelError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

template <class M>
void read_common(const json& doc, M& m, std::vector<std::pair<std::string, json>>& nodes) {
    const json agents = doc.value("agents", json::array());
    for (const auto& a : agents) m.add_agent(a.template get<std::string>());
    for (const auto& n : doc.at("nodes")) nodes.emplace_back(n.at("id").template get<std::string>(), n);
}

template <class M>
void read_edges(const json& doc, M& m) {
    const std::set<std::string> declared(m.agents.begin(), m.agents.end());
    const json rels = doc.value("relations", json::object());
    for (const auto& [ag, pairs] : rels.items()) {
        if (!declared.count(ag)) throw ModelError("relation for undeclared agent '" + ag + "'");
        for (const auto& p : pairs) {
            if (!p.is_array() || p.size() != 2) throw ModelError("relation entries must be [from, to]");
            m.add_edge(ag, m.index(p[0].template get<std::string>()), m.index(p[1].template get<std::string>()));
        }
    }
    const json actual = doc.value("actual", json::array());
    for (const auto& id : actual) m.set_actual(m.index(id.template get<std::string>()));
}

template <class M>
json write_common(const M& m) {
    json doc;
    doc["agents"] = m.agents;
    json rel = json::object();
    for (const auto& ag : m.agents) {
        json pairs = json::array();
        for (auto [x, y] : m.edges(ag)) pairs.push_back({m.name(x), m.name(y)});
        rel[ag] = pairs;
    }
    doc["relations"] = rel;
    json act = json::array();
    for (int x : m.actual()) act.push_back(m.name(x));
    doc["actual"] = act;
    return doc;
}

}  // namespace

ModelDocument parse_model(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ModelError(std::string("invalid JSON: ") + e.what());
    }
    try {
        const auto kind = doc.at("kind").get<std::string>();
        std::vector<std::pair<std::string, json>> nodes;
        if (kind == "kripke") {
            KripkeModel m;
            read_common(doc, m, nodes);
            for (const auto& [id, n] : nodes) m.add_world(id, n.value("val", std::set<std::string>{}));
            read_edges(doc, m);
            return m;
        }
        if (kind == "action") {
            ActionModel a;
            read_common(doc, a, nodes);
            for (const auto& [id, n] : nodes) a.add_event(id, parse(n.value("pre", std::string("top"))));
            read_edges(doc, a);
            return a;
        }
        throw ModelError("unknown model kind '" + kind + "'");
    } catch (const json::exception& e) {
        throw ModelError(std::string("malformed model document: ") + e.what());
    }
}

std::string dump_model(const KripkeModel& m) {
    json doc = write_common(m);
    doc["kind"] = "kripke";
    json nodes = json::array();
    for (int w = 0; w < m.size(); ++w) nodes.push_back({{"id", m.name(w)}, {"val", m.val(w)}});
    doc["nodes"] = nodes;
    return doc.dump(2);
}

std::string dump_model(const ActionModel& a) {
    json doc = write_common(a);
    doc["kind"] = "action";
    json nodes = json::array();
    for (int x = 0; x < a.size(); ++x) nodes.push_back({{"id", a.name(x)}, {"pre", render(a.pre(x))}});
    doc["nodes"] = nodes;
    return doc.dump(2);
}

KripkeModel load_kripke(const std::string& path) {
    auto doc = parse_model(read_file(path));
    if (auto* m = std::get_if<KripkeModel>(&doc)) return *m;
    throw ModelError("'" + path + "' is not a Kripke model");
}

ActionModel load_action(const std::string& path) {
    auto doc = parse_model(read_file(path));
    if (auto* a = std::get_if<ActionModel>(&doc)) return *a;
    throw ModelError("'" + path + "' is not an action model");
}

void save_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw ModelError("cannot write '" + path + "'");
    out << text << '\n';
}

std::string dump_verdict(const Verdict& v, const ActionModel& a, const ActionModel& b) {
    json doc;
    doc["holds"] = v.holds;
    doc["iterations"] = v.iterations;
    json cert = json::array();
    if (v.holds)
        for (int x = 0; x < a.size(); ++x)
            for (int y = 0; y < b.size(); ++y) {
                const auto& sig = v.certificate.at(x, y);
                if (sig.empty()) continue;
                json fs = json::array();
                for (const auto& f : sig) fs.push_back(render(f));
                cert.push_back({{"x", a.name(x)}, {"y", b.name(y)}, {"sigma", fs}});
            }
    doc["certificate"] = cert;
    if (v.failure)
        doc["failure"] = {{"condition", v.failure->condition}, {"event", v.failure->event}};
    else
        doc["failure"] = nullptr;
    return doc.dump(2);
}

}  // namespace amtk
