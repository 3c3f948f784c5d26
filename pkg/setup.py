import glob
import logging
import os

# distutils is provided by setuptools on Python >= 3.12
import setuptools  # noqa: F401
import distutils.command.build
import distutils.command.clean

from setuptools import setup
from setuptools.command.build_py import build_py
from setuptools.command.sdist import sdist

log = logging.getLogger("setup.py")

here = os.path.dirname(os.path.abspath(__file__))


class ManPages:
    """reStructuredText pages under docs/man/manN rendered with docutils."""

    man_dir = os.path.join(here, "docs", "man")

    @classmethod
    def sources(cls):
        return sorted(glob.glob(os.path.join(cls.man_dir, "man*", "*.rst")))

    @staticmethod
    def target(rst_path):
        section = os.path.basename(os.path.dirname(rst_path))[len("man"):]
        return "%s.%s" % (os.path.splitext(rst_path)[0], section)

    @classmethod
    def render(cls, dry_run=False):
        try:
            from docutils.core import publish_file
            from docutils.writers import manpage
        except ImportError:
            log.warning(
                "docutils is not available, no man pages will be generated")
            return []

        rendered = []
        for source in cls.sources():
            target = cls.target(source)
            log.info("generating man page %s", target)
            if not dry_run:
                publish_file(
                    source_path=source,
                    destination_path=target,
                    writer=manpage.Writer(),
                    settings_overrides={
                        "language_code": "en",
                        "report_level": 1,
                        "halt_level": 1,
                        "smart_quotes": True,
                        "traceback": True,
                    })
            rendered.append(target)
        return rendered

    @classmethod
    def data_files(cls):
        """(share/man/manN, [pages]) for every page already rendered."""
        sections = {}
        for source in cls.sources():
            target = cls.target(source)
            if os.path.exists(target):
                section_dir = os.path.basename(os.path.dirname(source))
                sections.setdefault(section_dir, []).append(target)
        return [(os.path.join("share", "man", s), pages)
                for (s, pages) in sorted(sections.items())]

    @classmethod
    def clean(cls, dry_run=False):
        for source in cls.sources():
            target = cls.target(source)
            if os.path.exists(target):
                log.info("removing %s", target)
                if not dry_run:
                    os.remove(target)


def hardcode_version(path):
    log.info("injecting version number into %s", path)
    if os.path.exists(path):
        os.remove(path)
    with open(path, "w") as f:
        f.write('VERSION = "%s"\n' % (__import__("epicast").__version__))


class epicast_build(distutils.command.build.build):
    def run(self):
        super().run()
        ManPages.render(dry_run=self.dry_run)
        self.distribution.data_files.extend(ManPages.data_files())


class epicast_build_py(build_py):
    def build_module(self, module, module_file, package):
        (dest_name, copied) = super().build_module(
            module, module_file, package)
        if dest_name == os.path.join(self.build_lib, "epicast", "version.py") \
                and not self.dry_run:
            hardcode_version(dest_name)
        return (dest_name, copied)


class epicast_build_manpages(distutils.command.build.build):
    def run(self):
        ManPages.render(dry_run=self.dry_run)


class epicast_sdist(sdist):
    def make_release_tree(self, base_dir, files):
        super().make_release_tree(base_dir, files)
        hardcode_version(os.path.join(base_dir, "epicast", "version.py"))


class epicast_clean(distutils.command.clean.clean):
    def run(self):
        ManPages.clean(dry_run=self.dry_run)
        super().run()


setup(
    name="epicast",
    version=__import__("epicast").__version__,
    description="batch infection Markov models of epidemic daily series",
    author="epicast contributors",
    packages=[
        "epicast",
        "epiqbd",
        "epiqbd.core",
        "epiqbd.data",
    ],
    package_data={
        "epiqbd.data": ["fixtures/*.csv", "fixtures/*.json"],
    },
    scripts=glob.glob(os.path.join(here, "bin", "*")),
    data_files=[
        ("share/doc/epicast", [
            os.path.join(here, s) for s in (
                "README.md",
                "docs/src/config.skeleton",
                "docs/changelog",
            )
        ]),
    ] + ManPages.data_files(),
    python_requires=">=3.8",
    install_requires=[
        "numpy>=1.17",
        "scipy>=1.4",
        "pandas>=1.5",
        "matplotlib>=3.3",
    ],
    setup_requires=["docutils"],
    cmdclass={
        "build": epicast_build,
        "build_py": epicast_build_py,
        "sdist": epicast_sdist,
        "clean": epicast_clean,
        "build_manpages": epicast_build_manpages,
    },
    classifiers=[
        "Development Status :: 4 - Beta",
        "Environment :: Console",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: GNU General Public License v3 or later (GPLv3+)",  # noqa
        "Operating System :: OS Independent",
        "Programming Language :: Python :: 3",
        "Topic :: Scientific/Engineering :: Mathematics",
        "Topic :: Scientific/Engineering :: Medical Science Apps.",
    ],
)
