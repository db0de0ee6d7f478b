// LD_PRELOAD shim that refuses every non-local socket connection. Used to
// prove that mock-mode runs never touch the network.
#include <cerrno>
#include <atomic>
#include <cstdio>
#include <cstdlib>

#include <dlfcn.h>
#include <sys/socket.h>

namespace {

std::atomic<long> g_attempts{0};

bool is_remote(const sockaddr* addr) {
  return addr != nullptr && addr->sa_family != AF_UNIX;
}

int deny(const char* call) {
  g_attempts.fetch_add(1);
  if (std::getenv("AGENTRAG_NETDENY_VERBOSE")) std::fprintf(stderr, "netdeny: blocked %s\n", call);
  errno = EACCES;
  return -1;
}

}  // namespace

extern "C" {

long agentrag_netdeny_attempts() { return g_attempts.load(); }

int connect(int fd, const sockaddr* addr, socklen_t len) {
  if (is_remote(addr)) return deny("connect");
  using Fn = int (*)(int, const sockaddr*, socklen_t);
  static const auto real = reinterpret_cast<Fn>(dlsym(RTLD_NEXT, "connect"));
  return real(fd, addr, len);
}

ssize_t sendto(int fd, const void* buf, size_t n, int flags, const sockaddr* addr, socklen_t len) {
  if (is_remote(addr)) return deny("sendto");
  using Fn = ssize_t (*)(int, const void*, size_t, int, const sockaddr*, socklen_t);
  static const auto real = reinterpret_cast<Fn>(dlsym(RTLD_NEXT, "sendto"));
  return real(fd, buf, n, flags, addr, len);
}

}
