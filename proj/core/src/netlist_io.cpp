#include <fstream>
#include <sstream>

#include "json.hpp"
#include "spinsc/errors.hpp"
#include "spinsc/netlist.hpp"

namespace spinsc {

using ojson = nlohmann::ordered_json;

namespace {

std::string fanin_ref(const LogicNetwork& net, const Fanin& f) {
    switch (f.src) {
        case Fanin::Src::Gate: return "g:" + std::to_string(f.index);
        case Fanin::Src::Input: return "in:" + net.inputs.at(f.index).name;
        default: return "c:" + std::to_string(f.index);
    }
}

Fanin parse_ref(const LogicNetwork& net, const std::string& s) {
    auto colon = s.find(':');
    if (colon == std::string::npos) throw ConfigError("netlist", "bad fanin reference '" + s + "'");
    std::string kind = s.substr(0, colon), rest = s.substr(colon + 1);
    try {
        if (kind == "g") return Fanin::gate(std::stoi(rest));
        if (kind == "c") {
            int v = std::stoi(rest);
            if (v != 0 && v != 1) throw ConfigError("netlist", "constant must be 0 or 1 in '" + s + "'");
            return Fanin::constant(v);
        }
    } catch (const std::logic_error&) {
        throw ConfigError("netlist", "bad fanin reference '" + s + "'");
    }
    if (kind == "in") {
        int idx = net.input_index(rest);
        if (idx < 0) throw ConfigError("netlist", "unknown primary input '" + rest + "'");
        return Fanin::input(idx);
    }
    throw ConfigError("netlist", "bad fanin reference '" + s + "'");
}

}  // namespace

std::string netlist_to_json(const LogicNetwork& net) {
    ojson j;
    j["format"] = "spinsc-netlist-1";
    j["name"] = net.name;
    ojson ins = ojson::array();
    for (const auto& in : net.inputs) {
        ojson e;
        e["name"] = in.name;
        if (in.complement_of >= 0) e["complement_of"] = net.inputs.at(in.complement_of).name;
        ins.push_back(e);
    }
    j["primary_inputs"] = ins;
    ojson outs = ojson::array();
    for (const auto& o : net.outputs) {
        ojson e;
        e["name"] = o.name;
        e["gate"] = o.gate;
        e["bit"] = o.bit;
        e["sign"] = o.sign;
        if (!o.group.empty()) e["group"] = o.group;
        outs.push_back(e);
    }
    j["primary_outputs"] = outs;
    ojson gs = ojson::array();
    for (const auto& g : net.gates) {
        ojson e;
        e["id"] = g.id;
        e["kind"] = to_string(g.kind);
        ojson f = ojson::array();
        for (const auto& fi : g.fanins) f.push_back(fanin_ref(net, fi));
        e["fanins"] = f;
        e["tags"] = g.tags;
        gs.push_back(e);
    }
    j["gates"] = gs;
    ojson taps = ojson::object();
    for (const auto& [name, sigs] : net.taps) {
        ojson f = ojson::array();
        for (const auto& fi : sigs) f.push_back(fanin_ref(net, fi));
        taps[name] = f;
    }
    j["taps"] = taps;
    return j.dump(1) + "\n";
}

LogicNetwork parse_netlist(const std::string& text) {
    ojson j;
    try {
        j = ojson::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError("netlist", std::string("malformed JSON: ") + e.what());
    }
    LogicNetwork net;
    try {
        net.name = j.value("name", "");
        std::vector<std::string> comp;
        for (const auto& e : j.at("primary_inputs")) {
            net.add_input(e.at("name").get<std::string>());
            comp.push_back(e.value("complement_of", ""));
        }
        for (std::size_t i = 0; i < comp.size(); ++i)
            if (!comp[i].empty()) {
                int c = net.input_index(comp[i]);
                if (c < 0) throw ConfigError("netlist", "unknown complement source '" + comp[i] + "'");
                net.inputs[i].complement_of = c;
            }
        const auto& gs = j.at("gates");
        for (std::size_t k = 0; k < gs.size(); ++k) {
            const auto& e = gs[k];
            int id = e.at("id").get<int>();
            if (id != int(k)) throw ConfigError("netlist", "gate ids must be 0..n-1 in order (found " + std::to_string(id) + " at " + std::to_string(k) + ")");
            std::vector<Fanin> fi;
            for (const auto& r : e.at("fanins")) fi.push_back(parse_ref(net, r.get<std::string>()));
            std::vector<std::string> tags;
            if (e.contains("tags")) tags = e.at("tags").get<std::vector<std::string>>();
            net.add_gate(gate_kind_from_string(e.at("kind").get<std::string>()), std::move(fi), std::move(tags));
        }
        for (const auto& e : j.at("primary_outputs"))
            net.add_output(e.at("name").get<std::string>(), e.at("gate").get<int>(), e.value("bit", 0), e.value("sign", false),
                           e.value("group", std::string()));
        if (j.contains("taps"))
            for (const auto& [name, arr] : j.at("taps").items()) {
                std::vector<Fanin> sigs;
                for (const auto& r : arr) sigs.push_back(parse_ref(net, r.get<std::string>()));
                net.taps[name] = sigs;
            }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("netlist", std::string("netlist schema error: ") + e.what());
    }
    return net;
}

LogicNetwork load_netlist(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("netlist", "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_netlist(ss.str());
}

void save_netlist(const std::string& path, const LogicNetwork& net) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("netlist", "cannot write " + path);
    out << netlist_to_json(net);
}

}  // namespace spinsc
