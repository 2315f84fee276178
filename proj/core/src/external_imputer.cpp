#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <csignal>
#include <fstream>
#include <thread>

#include <json.hpp>

#include "pfbench/errors.hpp"
#include "pfbench/imputer.hpp"
#include "pfbench/png_io.hpp"

namespace pfb {

namespace {

namespace fs = std::filesystem;

/// Runs `command <dir>` through the shell; kills the process group after the
/// deadline. Returns the exit code.
int run_with_deadline(const std::string& command, const fs::path& dir,
                      double deadline_seconds) {
    const std::string full = command + " '" + dir.string() + "'";
    pid_t pid = fork();
    if (pid < 0) throw IoError("fork failed for external imputer");
    if (pid == 0) {
        setpgid(0, 0);
        execl("/bin/sh", "sh", "-c", full.c_str(), static_cast<char*>(nullptr));
        _exit(127);
    }
    setpgid(pid, pid);

    const auto deadline = std::chrono::steady_clock::now() +
                          std::chrono::duration<double>(deadline_seconds);
    int status = 0;
    for (;;) {
        pid_t done = waitpid(pid, &status, WNOHANG);
        if (done == pid) break;
        if (done < 0) throw IoError("waitpid failed for external imputer");
        if (std::chrono::steady_clock::now() >= deadline) {
            kill(-pid, SIGKILL);
            waitpid(pid, &status, 0);
            throw TimeoutError("external imputer exceeded deadline");
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(20));
    }
    if (!WIFEXITED(status)) throw IoError("external imputer terminated abnormally");
    return WEXITSTATUS(status);
}

std::atomic<std::uint64_t> g_request_counter{0};

}  // namespace

ImageTensor external_impute(const OcclusionRequest& req,
                            const ExternalEndpoint& endpoint,
                            const std::vector<float>& channel_means) {
    req.validate();
    if (endpoint.command.empty())
        throw ValidationError("external imputer command is empty");

    const fs::path base =
        endpoint.work_dir.empty() ? fs::temp_directory_path() : endpoint.work_dir;
    fs::create_directories(base);
    const std::uint64_t serial = g_request_counter.fetch_add(1);
    const fs::path dir =
        base / ("pfb-req-" + std::to_string(::getpid()) + "-" +
                std::to_string(serial));
    fs::create_directory(dir);

    // input.png: occluded region pre-filled with the channel means.
    write_image_png(dir / "input.png", mean_impute(req, channel_means));

    // mask.png: 255 = to inpaint.
    ImageTensor maskimg(req.image.width(), req.image.height(), 1);
    for (std::size_t y = 0; y < req.image.height(); ++y)
        for (std::size_t x = 0; x < req.image.width(); ++x)
            maskimg.at(x, y, 0) =
                req.present.contains(req.mask.label_at(x, y)) ? 0.0f : 1.0f;
    write_image_png(dir / "mask.png", maskimg);

    nlohmann::json meta{{"image_id", req.image_id},
                        {"sample_index", req.sample_index},
                        {"coalition_hash", req.present.hash64()},
                        {"width", req.image.width()},
                        {"height", req.image.height()}};
    std::ofstream(dir / "meta.json") << meta.dump(2) << "\n";

    int rc = run_with_deadline(endpoint.command, dir, endpoint.deadline_seconds);
    if (rc != 0)
        throw IoError("external imputer exited with code " + std::to_string(rc));

    const fs::path out_path = dir / "output.png";
    if (!fs::exists(out_path)) throw IoError("external imputer wrote no output.png");
    ImageTensor response = read_image_png(out_path);
    if (response.width() != req.image.width() ||
        response.height() != req.image.height() ||
        response.channels() != req.image.channels())
        throw IoError("external imputer output dimensions mismatch");

    // Kept pixels restored from the original regardless of the response.
    ImageTensor out = req.image;
    const std::size_t c = out.channels();
    for (std::size_t y = 0; y < out.height(); ++y) {
        for (std::size_t x = 0; x < out.width(); ++x) {
            if (req.present.contains(req.mask.label_at(x, y))) continue;
            for (std::size_t ch = 0; ch < c; ++ch)
                out.at(x, y, ch) = std::clamp(response.at(x, y, ch), 0.0f, 1.0f);
        }
    }
    fs::remove_all(dir);
    return out;
}

}  // namespace pfb
