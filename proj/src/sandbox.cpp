#include "hackforge/sandbox.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/resource.h>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <thread>

#include "hackforge/error.hpp"

extern char** environ;

namespace hackforge {

namespace fs = std::filesystem;

std::string ExitStatus::describe() const {
    if (signaled) {
        const char* name = strsignal(value);
        return "signal " + std::to_string(value) + (name ? std::string(" (") + name + ")" : "");
    }
    return "exit code " + std::to_string(value);
}

std::string_view to_string(RunStatus s) {
    switch (s) {
        case RunStatus::OK: return "OK";
        case RunStatus::TLE: return "TLE";
        case RunStatus::MLE: return "MLE";
        case RunStatus::RE: return "RE";
    }
    return "?";
}

RunStatus classify_run(const ExecutionResult& r, const ResourceLimits& limits) {
    if (r.cpu_time_ms > limits.time_limit_ms || r.wall_killed) return RunStatus::TLE;
    if (r.peak_memory_mib > static_cast<double>(limits.memory_limit_mib)) return RunStatus::MLE;
    if (!r.exit.is_clean_exit()) return RunStatus::RE;
    return RunStatus::OK;
}

fs::path default_workspace() {
    if (const char* env = std::getenv("HACKFORGE_WORKDIR"); env && *env) return fs::path(env);
    return fs::temp_directory_path() / "hackforge";
}

namespace {

struct ProcessSpec {
    std::vector<std::string> argv;
    fs::path cwd;
    fs::path stdin_path;
    std::int64_t wall_cap_ms = 1000;
    std::optional<std::int64_t> address_space_bytes;
    std::optional<std::int64_t> cpu_seconds;
    std::optional<std::int64_t> stack_bytes;
    std::int64_t output_limit_bytes = 64LL << 20;
};

struct RawRun {
    ExecutionResult result;
    bool exec_failed = false;
    int exec_errno = 0;
};

std::vector<std::string> filtered_environment() {
    std::vector<std::string> env;
    for (char** e = environ; e && *e; ++e) {
        std::string_view kv(*e);
        if (kv.starts_with("HACKFORGE_")) continue;
        env.emplace_back(kv);
    }
    return env;
}

void set_limit(int resource, std::int64_t value) {
    rlimit rl{};
    rl.rlim_cur = static_cast<rlim_t>(value);
    rl.rlim_max = static_cast<rlim_t>(value);
    setrlimit(resource, &rl);
}

// Reads whatever is available on fd into sink, keeping at most cap bytes.
// Returns false on EOF.
bool drain(int fd, Bytes& sink, std::int64_t cap, bool& truncated) {
    char buf[65536];
    ssize_t n = read(fd, buf, sizeof buf);
    if (n < 0) return errno == EINTR || errno == EAGAIN;
    if (n == 0) return false;
    auto room = static_cast<std::int64_t>(cap) - static_cast<std::int64_t>(sink.size());
    if (room > 0) sink.append(buf, static_cast<std::size_t>(std::min<std::int64_t>(room, n)));
    if (n > room) truncated = true;
    return true;
}

RawRun run_process(const ProcessSpec& spec) {
    RawRun raw;
    std::vector<std::string> env_store = filtered_environment();
    std::vector<char*> argv;
    for (const auto& a : spec.argv) argv.push_back(const_cast<char*>(a.c_str()));
    argv.push_back(nullptr);
    std::vector<char*> envp;
    for (auto& e : env_store) envp.push_back(e.data());
    envp.push_back(nullptr);

    int out_pipe[2], err_pipe[2], status_pipe[2];
    if (pipe2(out_pipe, O_CLOEXEC) != 0) throw Error(Errc::SandboxFailure, "pipe failed");
    if (pipe2(err_pipe, O_CLOEXEC) != 0) {
        close(out_pipe[0]);
        close(out_pipe[1]);
        throw Error(Errc::SandboxFailure, "pipe failed");
    }
    if (pipe2(status_pipe, O_CLOEXEC) != 0) {
        for (int fd : {out_pipe[0], out_pipe[1], err_pipe[0], err_pipe[1]}) close(fd);
        throw Error(Errc::SandboxFailure, "pipe failed");
    }
    int in_fd = open(spec.stdin_path.c_str(), O_RDONLY | O_CLOEXEC);
    if (in_fd < 0) {
        for (int fd : {out_pipe[0], out_pipe[1], err_pipe[0], err_pipe[1], status_pipe[0], status_pipe[1]}) close(fd);
        throw Error(Errc::SandboxFailure, "cannot open stdin file " + spec.stdin_path.string());
    }
    std::string cwd = spec.cwd.string();

    auto start = std::chrono::steady_clock::now();
    pid_t pid = fork();
    if (pid < 0) {
        for (int fd : {out_pipe[0], out_pipe[1], err_pipe[0], err_pipe[1], status_pipe[0], status_pipe[1], in_fd})
            close(fd);
        throw Error(Errc::SandboxFailure, std::string("fork failed: ") + std::strerror(errno));
    }
    if (pid == 0) {
        // Child: only async-signal-safe calls until exec.
        setpgid(0, 0);
        if (chdir(cwd.c_str()) != 0) _exit(126);
        dup2(in_fd, 0);
        dup2(out_pipe[1], 1);
        dup2(err_pipe[1], 2);
        if (spec.address_space_bytes) set_limit(RLIMIT_AS, *spec.address_space_bytes);
        if (spec.cpu_seconds) set_limit(RLIMIT_CPU, *spec.cpu_seconds);
        if (spec.stack_bytes) set_limit(RLIMIT_STACK, *spec.stack_bytes);
        set_limit(RLIMIT_CORE, 0);
        execvpe(argv[0], argv.data(), envp.data());
        int err = errno;
        ssize_t ignored = write(status_pipe[1], &err, sizeof err);
        (void)ignored;
        _exit(127);
    }
    setpgid(pid, pid);
    close(in_fd);
    close(out_pipe[1]);
    close(err_pipe[1]);
    close(status_pipe[1]);

    ExecutionResult& r = raw.result;
    bool out_open = true, err_open = true;
    bool err_truncated = false;
    auto deadline = start + std::chrono::milliseconds(spec.wall_cap_ms);
    auto kill_group = [&] {
        kill(-pid, SIGKILL);
        kill(pid, SIGKILL);
    };

    while (out_open || err_open) {
        auto now = std::chrono::steady_clock::now();
        if (now >= deadline) {
            r.wall_killed = true;
            kill_group();
            break;
        }
        auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count();
        pollfd fds[2];
        int nfds = 0;
        if (out_open) fds[nfds++] = {out_pipe[0], POLLIN, 0};
        if (err_open) fds[nfds++] = {err_pipe[0], POLLIN, 0};
        int rc = poll(fds, static_cast<nfds_t>(nfds), static_cast<int>(std::min<std::int64_t>(remaining, 50)));
        if (rc < 0 && errno != EINTR) break;
        for (int i = 0; i < nfds; ++i) {
            if (!(fds[i].revents & (POLLIN | POLLHUP | POLLERR))) continue;
            if (fds[i].fd == out_pipe[0])
                out_open = drain(out_pipe[0], r.stdout_data, spec.output_limit_bytes, r.truncated);
            else
                err_open = drain(err_pipe[0], r.stderr_data, 1 << 20, err_truncated);
        }
    }

    int status = 0;
    rusage ru{};
    while (true) {
        pid_t w = wait4(pid, &status, WNOHANG, &ru);
        if (w == pid) break;
        if (w < 0 && errno != EINTR) {
            close(out_pipe[0]);
            close(err_pipe[0]);
            close(status_pipe[0]);
            throw Error(Errc::SandboxFailure, std::string("wait4 failed: ") + std::strerror(errno));
        }
        if (!r.wall_killed && std::chrono::steady_clock::now() >= deadline) {
            r.wall_killed = true;
            kill_group();
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(1));
    }
    auto end = std::chrono::steady_clock::now();
    // Stragglers in the process group (forked children) must not outlive the run.
    kill(-pid, SIGKILL);

    int child_errno = 0;
    if (read(status_pipe[0], &child_errno, sizeof child_errno) == static_cast<ssize_t>(sizeof child_errno)) {
        raw.exec_failed = true;
        raw.exec_errno = child_errno;
    }
    close(out_pipe[0]);
    close(err_pipe[0]);
    close(status_pipe[0]);

    if (WIFSIGNALED(status))
        r.exit = ExitStatus::killed_by(WTERMSIG(status));
    else
        r.exit = ExitStatus::exited(WEXITSTATUS(status));
    r.cpu_time_ms = (ru.ru_utime.tv_sec + ru.ru_stime.tv_sec) * 1000LL + (ru.ru_utime.tv_usec + ru.ru_stime.tv_usec) / 1000;
    r.wall_time_ms = std::chrono::duration_cast<std::chrono::milliseconds>(end - start).count();
    r.peak_memory_mib = static_cast<double>(ru.ru_maxrss) / 1024.0;
    return raw;
}

bool includes_testlib(std::string_view source) {
    return source.find("\"testlib.h\"") != std::string_view::npos || source.find("<testlib.h>") != std::string_view::npos;
}

}  // namespace

Sandbox::Sandbox(SandboxOptions options) : options_(std::move(options)) {
    if (options_.workspace.empty()) options_.workspace = default_workspace();
    for (const auto& tc : options_.toolchains) tc.validate();
    fs::create_directories(options_.workspace / "tmp");
    fs::create_directories(options_.workspace / "cache");
}

const ToolchainSpec& Sandbox::toolchain(const std::string& id) const {
    for (const auto& tc : options_.toolchains)
        if (tc.id == id) return tc;
    throw Error(Errc::ToolchainUnavailable, id + " (not configured)");
}

bool Sandbox::has_toolchain(const std::string& id) const {
    for (const auto& tc : options_.toolchains)
        if (tc.id == id) return true;
    return false;
}

fs::path Sandbox::fresh_dir(std::string_view prefix) const {
    std::string tmpl = (options_.workspace / "tmp" / (std::string(prefix) + "-XXXXXX")).string();
    std::vector<char> buf(tmpl.begin(), tmpl.end());
    buf.push_back('\0');
    if (!mkdtemp(buf.data())) throw Error(Errc::SandboxFailure, "mkdtemp failed under " + options_.workspace.string());
    return fs::path(buf.data());
}

bool Sandbox::probe(const ToolchainSpec& tc) {
    {
        std::lock_guard lock(mutex_);
        if (auto it = available_.find(tc.id); it != available_.end()) return it->second;
    }
    bool ok = true;
    fs::path dir = fresh_dir("probe");
    try {
        compile("int main() { return 0; }\n", tc, dir);
    } catch (const Error&) {
        ok = false;
    }
    std::error_code ec;
    fs::remove_all(dir, ec);
    std::lock_guard lock(mutex_);
    available_[tc.id] = ok;
    return ok;
}

CompiledArtifact Sandbox::compile(std::string_view source, const std::string& toolchain_id) {
    const ToolchainSpec& tc = toolchain(toolchain_id);
    std::string key = sha256_hex(tc.id + '\n' + tc.compile_template + '\n' + std::string(source) + '\n' +
                                 (includes_testlib(source) ? std::string(bundled_testlib_header()) : std::string()));
    fs::path cache_dir = options_.workspace / "cache" / key;
    fs::path binary = cache_dir / "prog";

    std::shared_ptr<std::mutex> key_lock;
    {
        std::lock_guard lock(mutex_);
        auto& slot = compile_locks_[key];
        if (!slot) slot = std::make_shared<std::mutex>();
        key_lock = slot;
    }
    std::lock_guard guard(*key_lock);
    if (options_.use_compile_cache && fs::is_regular_file(cache_dir / "ok")) {
        return {binary, tc.id, read_file(cache_dir / "log"), tc.run_template};
    }
    if (!probe(tc)) throw Error(Errc::ToolchainUnavailable, tc.id);

    fs::path work = fresh_dir("compile");
    CompiledArtifact art;
    try {
        art = compile(source, tc, work);
    } catch (...) {
        std::error_code ec;
        fs::remove_all(work, ec);
        throw;
    }
    fs::create_directories(cache_dir);
    fs::path staged = cache_dir / ("prog.tmp." + std::to_string(getpid()));
    fs::copy_file(art.binary_path, staged, fs::copy_options::overwrite_existing);
    fs::rename(staged, binary);
    write_file(cache_dir / "log", art.compile_log);
    write_file(cache_dir / "ok", "");
    std::error_code ec;
    fs::remove_all(work, ec);
    return {binary, tc.id, art.compile_log, tc.run_template};
}

CompiledArtifact Sandbox::compile(std::string_view source, const ToolchainSpec& tc, const fs::path& workdir) {
    fs::create_directories(workdir);
    fs::path src = fs::absolute(workdir / ("main" + tc.source_extension));
    fs::path out = fs::absolute(workdir / "prog");
    write_file(src, source);
    if (includes_testlib(source)) write_file(workdir / "testlib.h", bundled_testlib_header());
    write_file(workdir / ".stdin", "");

    std::vector<std::string> argv;
    for (auto& part : split_command(tc.compile_template))
        argv.push_back(replace_all(replace_all(part, "{src}", src.string()), "{out}", out.string()));
    if (argv.empty()) throw Error(Errc::ToolchainUnavailable, tc.id + " (empty template)");

    ProcessSpec spec;
    spec.argv = argv;
    spec.cwd = workdir;
    spec.stdin_path = workdir / ".stdin";
    spec.wall_cap_ms = options_.compile_timeout_ms;
    spec.cpu_seconds = options_.compile_timeout_ms / 1000 + 1;
    spec.output_limit_bytes = 1 << 20;
    RawRun raw = run_process(spec);
    std::string log = raw.result.stderr_data + raw.result.stdout_data;
    if (raw.exec_failed)
        throw Error(Errc::ToolchainUnavailable, tc.id + " (" + argv[0] + ": " + std::strerror(raw.exec_errno) + ")");
    if (raw.result.wall_killed) throw Error(Errc::CompileTimeout, tc.id);
    if (!raw.result.exit.is_clean_exit() || !fs::is_regular_file(out)) throw Error(Errc::CompileError, log);
    return {out, tc.id, log, tc.run_template};
}

ExecutionResult Sandbox::execute(const CompiledArtifact& artifact, std::string_view input, const ResourceLimits& limits,
                                 const ExecOptions& opts) const {
    limits.validate();
    if (!fs::is_regular_file(artifact.binary_path))
        throw Error(Errc::SandboxFailure, "artifact missing: " + artifact.binary_path.string());
    fs::path dir = fresh_dir("run");
    struct Cleanup {
        fs::path dir;
        ~Cleanup() {
            std::error_code ec;
            fs::remove_all(dir, ec);
        }
    } cleanup{dir};

    fs::path stdin_path = dir / ".stdin";
    write_file(stdin_path, input);
    for (const auto& [name, content] : opts.files) write_file(dir / name, content);

    ProcessSpec spec;
    for (auto& part : split_command(artifact.run_template))
        spec.argv.push_back(replace_all(part, "{bin}", fs::absolute(artifact.binary_path).string()));
    for (const auto& a : opts.args) spec.argv.push_back(a);
    spec.cwd = dir;
    spec.stdin_path = stdin_path;
    spec.wall_cap_ms = limits.wall_cap_ms();
    std::int64_t slack = std::max(options_.address_space_slack_mib, limits.memory_limit_mib / 4);
    spec.address_space_bytes = (limits.memory_limit_mib + slack) << 20;
    spec.cpu_seconds = limits.wall_cap_ms() / 1000 + 1;
    spec.stack_bytes = options_.stack_limit_mib << 20;
    spec.output_limit_bytes = limits.output_limit_bytes;

    RawRun raw = run_process(spec);
    if (raw.exec_failed)
        throw Error(Errc::SandboxFailure, "exec " + spec.argv[0] + ": " + std::strerror(raw.exec_errno));
    return std::move(raw.result);
}

std::string Sandbox::toolchain_identity(const std::string& id) {
    {
        std::lock_guard lock(mutex_);
        if (auto it = identity_.find(id); it != identity_.end()) return it->second;
    }
    const ToolchainSpec& tc = toolchain(id);
    auto argv = split_command(tc.compile_template);
    std::string identity = tc.id + ": " + tc.compile_template;
    if (!argv.empty()) {
        fs::path dir = fresh_dir("ident");
        write_file(dir / ".stdin", "");
        ProcessSpec spec;
        spec.argv = {argv[0], "--version"};
        spec.cwd = dir;
        spec.stdin_path = dir / ".stdin";
        spec.wall_cap_ms = 10'000;
        try {
            RawRun raw = run_process(spec);
            if (!raw.exec_failed) {
                std::string first = raw.result.stdout_data.substr(0, raw.result.stdout_data.find('\n'));
                identity += " [" + first + "]";
            }
        } catch (const Error&) {
        }
        std::error_code ec;
        fs::remove_all(dir, ec);
    }
    std::lock_guard lock(mutex_);
    identity_[id] = identity;
    return identity;
}

}  // namespace hackforge
