#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#ifndef POLYPROJ_DATA_DIR
#error "POLYPROJ_DATA_DIR must be defined by the build"
#endif

namespace test_support {

inline std::filesystem::path data_path(const std::string& name)
{
    return std::filesystem::path(POLYPROJ_DATA_DIR) / name;
}

inline std::string read_data(const std::string& name)
{
    std::ifstream in(data_path(name), std::ios::binary);
    if (!in) throw std::runtime_error("missing test data " + name);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace test_support
