#include "deputy/chunk/workspace.hpp"

#include <random>

#include "deputy/util/proc.hpp"

namespace deputy::chunk {

namespace fs = std::filesystem;

WorkspaceHandle::WorkspaceHandle(fs::path root) : root_(std::move(root)), disposed_(false) {}

WorkspaceHandle::~WorkspaceHandle() {
    try {
        dispose();
    } catch (...) {
    }
}

WorkspaceHandle::WorkspaceHandle(WorkspaceHandle&& other) noexcept
    : root_(std::move(other.root_)), disposed_(other.disposed_) {
    other.disposed_ = true;
    other.root_.clear();
}

WorkspaceHandle& WorkspaceHandle::operator=(WorkspaceHandle&& other) noexcept {
    if (this != &other) {
        try {
            dispose();
        } catch (...) {
        }
        root_ = std::move(other.root_);
        disposed_ = other.disposed_;
        other.disposed_ = true;
        other.root_.clear();
    }
    return *this;
}

const fs::path& WorkspaceHandle::root() const {
    if (disposed_) throw WorkspaceDisposed();
    return root_;
}

void WorkspaceHandle::dispose() {
    if (disposed_) return;
    disposed_ = true;
    std::error_code ec;
    fs::remove_all(root_, ec);  // unconditional removal, errors ignored
}

WorkspaceHandle clone_ephemeral(const std::string& repo_url, const std::string& ref) {
    static std::mt19937_64 rng{std::random_device{}()};
    fs::path dir;
    {
        std::uniform_int_distribution<unsigned long long> dist;
        dir = fs::temp_directory_path() /
              ("deputy-ws-" + std::to_string(dist(rng)));
    }

    auto clone = util::run_command({"git", "clone", "--quiet", repo_url, dir.string()});
    if (!clone.ok()) {
        std::error_code ec;
        fs::remove_all(dir, ec);
        throw CloneError("clone failed for " + repo_url + ": " + clone.err);
    }
    auto checkout = util::run_command(
        {"git", "-C", dir.string(), "checkout", "--quiet", "--detach", ref});
    if (!checkout.ok()) {
        std::error_code ec;
        fs::remove_all(dir, ec);
        throw CloneError("checkout of '" + ref + "' failed: " + checkout.err);
    }
    return WorkspaceHandle(dir);
}

}  // namespace deputy::chunk
