#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "deputy/util/proc.hpp"

namespace testutil {

namespace fs = std::filesystem;

/// Temp directory removed on destruction.
class TempDir {
public:
    TempDir() {
        static std::mt19937_64 rng{std::random_device{}()};
        std::uniform_int_distribution<unsigned long long> dist;
        path_ = fs::temp_directory_path() / ("deputy-test-" + std::to_string(dist(rng)));
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

inline void write_file(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out << content;
}

inline std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

inline void git(const std::vector<std::string>& args, const std::string& cwd) {
    std::vector<std::string> argv = {"git",
                                     "-c",
                                     "user.email=dev@example.com",
                                     "-c",
                                     "user.name=dev",
                                     "-c",
                                     "init.defaultBranch=main",
                                     "-c",
                                     "commit.gpgsign=false"};
    argv.insert(argv.end(), args.begin(), args.end());
    auto result = deputy::util::run_command(argv, cwd);
    if (!result.ok()) {
        throw std::runtime_error("git failed: " + result.err);
    }
}

inline std::string git_out(const std::vector<std::string>& args, const std::string& cwd) {
    std::vector<std::string> argv = {"git"};
    argv.insert(argv.end(), args.begin(), args.end());
    auto result = deputy::util::run_command(argv, cwd);
    if (!result.ok()) throw std::runtime_error("git failed: " + result.err);
    return result.out;
}

inline const std::string kOrdersBase =
    "def calculate_total(items):\n"
    "    return sum(item.price for item in items)\n"
    "\n"
    "def apply_discount(total, discount_percent):\n"
    "    return total * (1 - discount_percent / 100)\n"
    "\n"
    "def process_order(items, discount_percent=0):\n"
    "    total = calculate_total(items)\n"
    "    final_price = apply_discount(total, discount_percent)\n"
    "    return final_price\n"
    "\n"
    "# Example of where process_order is called\n"
    "class OrderService:\n"
    "    def create_order(self, user_id, items):\n"
    "        user = get_user(user_id)\n"
    "        discount = user.loyalty_discount\n"
    "        total = process_order(items, discount)\n"
    "        return Order(user=user, items=items, total=total)\n";

inline const std::string kOrdersChanged =
    "def calculate_total(items):\n"
    "    return sum(item.price for item in items)\n"
    "\n"
    "def apply_discount(total, discount_percent):\n"
    "    return total * (1 - discount_percent / 100)\n"
    "\n"
    "def process_order(items, discount_percent=0):\n"
    "    total = calculate_total(items)\n"
    "    if discount_percent > 50:\n"
    "        raise ValueError(\"Discount cannot exceed 50%\")\n"
    "    final_price = apply_discount(total, discount_percent)\n"
    "    return final_price\n"
    "\n"
    "# Example of where process_order is called\n"
    "class OrderService:\n"
    "    def create_order(self, user_id, items):\n"
    "        user = get_user(user_id)\n"
    "        discount = user.loyalty_discount\n"
    "        total = process_order(items, discount)\n"
    "        return Order(user=user, items=items, total=total)\n";

/// Two-branch repo carrying the discount-validation change: main holds the
/// base listing, branch "feature" inserts the guard into process_order.
inline void make_orders_repo(const fs::path& root) {
    std::string dir = root.string();
    git({"init", "-q", "-b", "main", dir}, ".");
    write_file(root / "orders.py", kOrdersBase);
    git({"add", "-A"}, dir);
    git({"commit", "-qm", "base"}, dir);
    git({"checkout", "-qb", "feature"}, dir);
    write_file(root / "orders.py", kOrdersChanged);
    git({"commit", "-qam", "validate discount"}, dir);
    git({"checkout", "-q", "main"}, dir);
}

inline std::string orders_diff_text(const fs::path& repo) {
    return git_out({"-C", repo.string(), "-c", "core.quotepath=false", "diff", "--no-color",
                    "--no-ext-diff", "main...feature"},
                   ".");
}

}  // namespace testutil
