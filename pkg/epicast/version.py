"""Version of an epicast checkout; replaced by a constant at build time."""

FALLBACK = "0+unknown"


def _git(*args, cwd):
    import subprocess
    return subprocess.check_output(
        ("git",) + args, cwd=cwd, stderr=subprocess.DEVNULL).decode().strip()


def _git_version():
    """The last release tag plus "+<commit>[.dirty]" for anything after it."""
    import os
    import re

    checkout = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
    if not os.path.exists(os.path.join(checkout, ".git")):
        return FALLBACK

    try:
        described = _git("describe", "--tags", "--dirty", "--abbrev=7",
                         "--match=[0-9]*", cwd=checkout)
        (tag, commits, commit, dirty) = re.fullmatch(
            r"(.*?)(?:-([0-9]+)-g([0-9a-f]{7}))?(-dirty)?",
            described).groups()
        if not (commits or dirty):
            return tag
        local = [commit or _git("rev-parse", "--short=7", "HEAD",
                                cwd=checkout)]
    except Exception:
        # no git, or no release tag yet
        return FALLBACK

    if dirty:
        local.append("dirty")
    return "%s+%s" % (tag, ".".join(local))


VERSION = _git_version()
