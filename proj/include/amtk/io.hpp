#pragma once

#include <string>
#include <variant>

#include "amtk/emulation.hpp"
#include "amtk/model.hpp"

namespace amtk {

using ModelDocument = std::variant<KripkeModel, ActionModel>;

ModelDocument parse_model(const std::string& json_text);
std::string dump_model(const KripkeModel& m);
std::string dump_model(const ActionModel& a);

KripkeModel load_kripke(const std::string& path);
ActionModel load_action(const std::string& path);
void save_text(const std::string& path, const std::string& text);

std::string dump_verdict(const Verdict& v, const ActionModel& a, const ActionModel& b);

}  // namespace amtk
