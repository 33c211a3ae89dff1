from slfem.cli import entry

entry()
