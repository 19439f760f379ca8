#pragma once

#include "doctest.h"
#include "motif/coordination.hpp"
#include "motif/lang.hpp"

#include <string>

namespace testing {

inline motif::ModelFile model_of(const std::string& text)
{
    auto r = motif::parse(text);
    for (const auto& d : r.diagnostics)
        INFO(d.format());
    REQUIRE(r.ok());
    auto diags = motif::validate(*r.model);
    for (const auto& d : diags)
        MESSAGE(d.format());
    REQUIRE(diags.empty());
    return *r.model;
}

inline motif::Configuration config_of(const std::string& text)
{
    return motif::instantiate(model_of(text));
}

inline std::string scenario_path(const std::string& name)
{
    return std::string(MOTIF_SCENARIO_DIR) + "/" + name + ".motif";
}

}  // namespace testing
