#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

namespace deputy::chunk {

class CloneError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class WorkspaceDisposed : public std::runtime_error {
public:
    WorkspaceDisposed() : std::runtime_error("workspace disposed") {}
};

/// Owns a temporary checkout; the tree is removed on dispose() or
/// destruction, whichever comes first.
class WorkspaceHandle {
public:
    WorkspaceHandle() = default;
    explicit WorkspaceHandle(std::filesystem::path root);
    ~WorkspaceHandle();

    WorkspaceHandle(const WorkspaceHandle&) = delete;
    WorkspaceHandle& operator=(const WorkspaceHandle&) = delete;
    WorkspaceHandle(WorkspaceHandle&& other) noexcept;
    WorkspaceHandle& operator=(WorkspaceHandle&& other) noexcept;

    /// Throws WorkspaceDisposed after dispose().
    const std::filesystem::path& root() const;

    void dispose();
    bool disposed() const { return disposed_; }

private:
    std::filesystem::path root_;
    bool disposed_ = true;
};

/// Clones repo_url into a temporary directory and checks out `ref` (branch,
/// tag, or commit). Local paths work as URLs.
WorkspaceHandle clone_ephemeral(const std::string& repo_url, const std::string& ref);

}  // namespace deputy::chunk
