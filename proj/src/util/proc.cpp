#include "deputy/util/proc.hpp"

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <stdexcept>

namespace deputy::util {

namespace {

// Drains both pipes concurrently so a child filling one cannot deadlock us
// on the other.
void read_both(int out_fd, int err_fd, std::string& out, std::string& err) {
    struct Stream {
        int fd;
        std::string* sink;
        bool open = true;
    };
    Stream streams[2] = {{out_fd, &out}, {err_fd, &err}};
    char buf[4096];
    while (streams[0].open || streams[1].open) {
        pollfd fds[2];
        nfds_t n = 0;
        for (auto& s : streams) {
            if (s.open) fds[n++] = {s.fd, POLLIN, 0};
        }
        if (poll(fds, n, -1) < 0) {
            if (errno == EINTR) continue;
            break;
        }
        nfds_t idx = 0;
        for (auto& s : streams) {
            if (!s.open) continue;
            const pollfd& p = fds[idx++];
            if (p.revents & (POLLIN | POLLHUP)) {
                ssize_t got = ::read(s.fd, buf, sizeof(buf));
                if (got > 0) {
                    s.sink->append(buf, static_cast<std::size_t>(got));
                } else if (got == 0 || (got < 0 && errno != EINTR)) {
                    s.open = false;
                }
            } else if (p.revents & (POLLERR | POLLNVAL)) {
                s.open = false;
            }
        }
    }
}

}  // namespace

RunResult run_command(const std::vector<std::string>& argv,
                      const std::optional<std::string>& cwd) {
    if (argv.empty()) throw std::runtime_error("run_command: empty argv");

    int out_pipe[2];
    int err_pipe[2];
    if (pipe(out_pipe) != 0 || pipe(err_pipe) != 0) {
        throw std::runtime_error("run_command: pipe failed");
    }

    pid_t pid = fork();
    if (pid < 0) throw std::runtime_error("run_command: fork failed");

    if (pid == 0) {
        if (cwd && chdir(cwd->c_str()) != 0) _exit(127);
        dup2(out_pipe[1], STDOUT_FILENO);
        dup2(err_pipe[1], STDERR_FILENO);
        close(out_pipe[0]);
        close(out_pipe[1]);
        close(err_pipe[0]);
        close(err_pipe[1]);

        std::vector<char*> args;
        args.reserve(argv.size() + 1);
        for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
        args.push_back(nullptr);
        execvp(args[0], args.data());
        _exit(127);
    }

    close(out_pipe[1]);
    close(err_pipe[1]);

    RunResult result;
    read_both(out_pipe[0], err_pipe[0], result.out, result.err);
    close(out_pipe[0]);
    close(err_pipe[0]);

    int status = 0;
    while (waitpid(pid, &status, 0) < 0 && errno == EINTR) {
    }
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

}  // namespace deputy::util
