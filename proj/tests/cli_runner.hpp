#pragma once

// Subprocess helper for tests that drive the installed CLI binary.

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#ifndef HYPERKG_CLI_PATH
#define HYPERKG_CLI_PATH "hyperkg"
#endif

namespace testsupport {

struct CommandResult {
    int exit_code = -1;
    std::string output;  // stdout + stderr
};

inline std::string cli_path() {
    if (const char* env = std::getenv("HYPERKG_CLI")) return env;
    return HYPERKG_CLI_PATH;
}

inline CommandResult run_cli(const std::string& args) {
    const std::string command = cli_path() + " " + args + " 2>&1";
    FILE* pipe = popen(command.c_str(), "r");
    if (!pipe) {
        throw std::runtime_error("failed to spawn: " + command);
    }
    CommandResult result;
    std::array<char, 4096> buffer{};
    std::size_t n = 0;
    while ((n = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) {
        result.output.append(buffer.data(), n);
    }
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        dir_ = std::filesystem::temp_directory_path() /
               ("hyperkg_" + tag + "_" + std::to_string(::getpid()));
        std::filesystem::create_directories(dir_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(dir_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    void write(const std::string& name, const std::string& content) const {
        std::ofstream out(dir_ / name);
        out << content;
    }

    std::string read(const std::string& name) const {
        std::ifstream in(dir_ / name);
        if (!in) {
            throw std::runtime_error("missing file: " + path(name));
        }
        std::ostringstream buffer;
        buffer << in.rdbuf();
        return buffer.str();
    }

    bool exists(const std::string& name) const {
        return std::filesystem::exists(dir_ / name);
    }

private:
    std::filesystem::path dir_;
};

inline std::string figure_triples_tsv() {
    return
        "Cloudburst\tcomposer\tEric Whitacre\n"
        "Cloudburst\tdirector\tFrancis Searle\n"
        "Eric Whitacre\tcountry of citizenship\tAmerican\n"
        "Francis Searle\tdate of birth\t14 March 1909\n"
        "Francis Searle\tdate of death\t31 July 2002\n";
}

} // namespace testsupport
