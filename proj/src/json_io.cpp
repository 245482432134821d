#include "easic/json_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "easic/error.hpp"

namespace easic {

using nlohmann::ordered_json;

namespace {

ordered_json parse_or_fail(const std::string& text) {
  try {
    return ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorCode::syntax, std::string("JSON: ") + e.what());
  }
}

template <class F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::syntax, std::string("JSON schema: ") + e.what());
  }
}

}  // namespace

std::string emit_json(const Netlist& nl) {
  ordered_json j;
  j["format"] = "easic-netlist";
  j["version"] = 1;
  j["name"] = nl.name;
  j["inputs"] = ordered_json::array();
  for (InstId p : nl.pis) j["inputs"].push_back(nl.inst(p).name);
  j["outputs"] = ordered_json::array();
  for (InstId p : nl.pos) j["outputs"].push_back({{"name", nl.inst(p).name}, {"net", nl.net(nl.inst(p).inputs[0]).name}});
  j["instances"] = ordered_json::array();
  for (const auto& inst : nl.instances) {
    if (inst.kind == CellKind::pi || inst.kind == CellKind::po) continue;
    ordered_json e;
    e["name"] = inst.name;
    e["type"] = cell_type_name(inst);
    if (inst.is_lut() && !inst.configurable) e["init"] = inst.mask.to_hex();
    if (inst.is_lut()) e["state"] = inst.state == LutState::reconfigurable ? "reconfigurable" : "static";
    e["inputs"] = ordered_json::array();
    for (NetId n : inst.inputs) e["inputs"].push_back(nl.net(n).name);
    e["output"] = nl.net(inst.output).name;
    j["instances"].push_back(std::move(e));
  }
  j["config_chain"] = ordered_json::array();
  for (InstId c : nl.config_chain) j["config_chain"].push_back(nl.inst(c).name);
  return j.dump(2) + "\n";
}

Netlist parse_json_netlist(const std::string& text) {
  const ordered_json j = parse_or_fail(text);
  return guarded([&] {
    if (j.value("format", "") != "easic-netlist") fail(ErrorCode::syntax, "not an easic-netlist document");
    Netlist nl;
    nl.name = j.value("name", "top");
    for (const auto& p : j.at("inputs")) {
      Instance pi;
      pi.name = p.get<std::string>();
      pi.kind = CellKind::pi;
      pi.output = nl.find_or_add_net(pi.name);
      nl.add_instance(std::move(pi));
    }
    for (const auto& e : j.at("instances")) {
      const std::string type = e.at("type").get<std::string>();
      const auto ctype = lookup_cell_type(type);
      if (!ctype) fail(ErrorCode::unknown_cell, "unknown cell type " + type);
      Instance inst;
      inst.name = e.at("name").get<std::string>();
      inst.kind = ctype->kind;
      for (const auto& n : e.at("inputs")) inst.inputs.push_back(nl.find_or_add_net(n.get<std::string>()));
      inst.output = nl.find_or_add_net(e.at("output").get<std::string>());
      if (ctype->kind == CellKind::lut) {
        if (inst.inputs.size() != ctype->lut_width)
          fail(ErrorCode::width_mismatch, inst.name + ": " + type + " needs " + std::to_string(ctype->lut_width) + " inputs");
        if (ctype->configurable) {
          inst.configurable = true;
          inst.programmed = false;
          inst.mask = TruthTable(ctype->lut_width, 0);
        } else {
          inst.mask = TruthTable::from_hex(ctype->lut_width, e.at("init").get<std::string>());
        }
        const std::string state = e.value("state", "reconfigurable");
        if (state != "reconfigurable" && state != "static") fail(ErrorCode::syntax, "bad LUT state " + state);
        inst.state = state == "static" ? LutState::static_logic : LutState::reconfigurable;
      } else if (ctype->kind != CellKind::and_gate && ctype->kind != CellKind::or_gate &&
                 inst.inputs.size() != ctype->inputs.size()) {
        fail(ErrorCode::width_mismatch, inst.name + ": wrong pin count for " + type);
      }
      nl.add_instance(std::move(inst));
    }
    for (const auto& p : j.at("outputs")) {
      Instance po;
      po.name = p.at("name").get<std::string>();
      po.kind = CellKind::po;
      po.inputs.push_back(nl.find_or_add_net(p.value("net", po.name)));
      nl.add_instance(std::move(po));
    }
    std::vector<std::string> chain;
    if (j.contains("config_chain"))
      for (const auto& c : j.at("config_chain")) chain.push_back(c.get<std::string>());
    nl.finalize();
    for (const auto& c : chain) {
      const auto id = nl.find_instance(c);
      if (!id) fail(ErrorCode::unknown_instance, "configuration chain names unknown instance " + c);
      nl.config_chain.push_back(*id);
    }
    return nl;
  });
}

std::vector<RawPath> parse_paths_json(const std::string& text) {
  const ordered_json j = parse_or_fail(text);
  return guarded([&] {
    std::vector<RawPath> out;
    for (const auto& p : j.at("paths")) {
      RawPath rp;
      for (const auto& e : p.at("elements")) {
        if (!e.is_array() || e.size() != 2) fail(ErrorCode::syntax, "path element must be [name, delay]");
        const double d = e[1].get<double>();
        if (!(d >= 0)) fail(ErrorCode::syntax, "path delays must be non-negative");
        rp.elements.emplace_back(e[0].get<std::string>(), d);
      }
      out.push_back(std::move(rp));
    }
    return out;
  });
}

std::string emit_paths_json(const std::vector<TimedPath>& paths, const Netlist& nl) {
  ordered_json j;
  j["paths"] = ordered_json::array();
  for (const auto& p : paths) {
    ordered_json e = ordered_json::array();
    for (const auto& el : p.elements) {
      const Instance& inst = nl.inst(el.inst);
      const bool port = inst.kind == CellKind::pi || inst.kind == CellKind::po;
      e.push_back({(port ? "port:" : "") + inst.name, el.delay});
    }
    j["paths"].push_back({{"elements", e}, {"total", p.total}});
  }
  return j.dump(2) + "\n";
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::io, "cannot write " + path);
  out << text;
  if (!out) fail(ErrorCode::io, "write failed for " + path);
}

}  // namespace easic
