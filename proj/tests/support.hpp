#pragma once

#include "pencil/scene.hpp"

#include <filesystem>
#include <random>
#include <string>

namespace pencil::test {

inline Scene scene(const std::string& name)
{
    return build_scene(preset(name));
}

inline SurfacePencil preset_pencil(const std::string& name)
{
    return scene(name).pencil;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& tag)
{
    static std::mt19937_64 rng{std::random_device{}()};
    auto dir = std::filesystem::temp_directory_path() / ("pencil-" + tag + "-" + std::to_string(rng()));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace pencil::test
