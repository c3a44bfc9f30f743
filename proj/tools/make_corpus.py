#!/usr/bin/env python3
# Project msbench - Copyright 2026 The msbench Authors.
# SPDX-License-Identifier: Apache-2.0
"""Builds tests/data/corpus.tsv from public drug/solvation SMILES sets.

Reference columns (formula, monoisotopic mass, randomized SMILES) are
computed once with RDKit and frozen; the C++ build never needs RDKit.

usage: make_corpus.py <datamol-data-dir> <out.tsv>
"""
import csv
import random
import sys

from rdkit import Chem, RDLogger, rdBase
from rdkit.Chem.rdMolDescriptors import CalcMolFormula
from rdkit.Chem.Descriptors import ExactMolWt

RDLogger.DisableLog("rdApp.*")


def sources(data_dir):
    for name in ("chembl_drugs.csv", "freesolv.csv", "chembl_samples.csv"):
        with open(f"{data_dir}/{name}") as fh:
            for row in csv.DictReader(fh):
                yield row["smiles"]


def main():
    data_dir, out = sys.argv[1], sys.argv[2]
    rng = random.Random(20260115)
    rdBase.SeedRandomNumberGenerator(20260115)
    seen = set()
    rows = []
    for smi in sources(data_dir):
        mol = Chem.MolFromSmiles(smi)
        if mol is None or mol.GetNumAtoms() > 70:
            continue
        if any(a.GetSymbol() == "*" for a in mol.GetAtoms()):
            continue
        # Pentavalent nitro notation is only accepted through RDKit's
        # cleanup step; keep the corpus to strings valid as written.
        if "N(=O)=O" in smi or "N(=O)(=O)" in smi:
            continue
        mass = ExactMolWt(mol)
        if mass > 1100:
            continue
        Chem.RemoveStereochemistry(mol)
        key = Chem.MolToSmiles(mol)
        if key in seen:
            continue
        seen.add(key)
        rand_arom = Chem.MolToSmiles(mol, doRandom=True, canonical=False)
        kek = Chem.Mol(mol)
        Chem.Kekulize(kek, clearAromaticFlags=True)
        rand_kek = Chem.MolToSmiles(kek, doRandom=True, canonical=False,
                                    kekuleSmiles=True)
        rows.append((smi, CalcMolFormula(mol), f"{mass:.6f}",
                     mol.GetNumAtoms(), rand_arom, rand_kek, key))
    rng.shuffle(rows)
    with open(out, "w") as fh:
        fh.write("smiles\tref_formula\tref_mass\theavy_atoms\t"
                 "random_aromatic\trandom_kekule\tref_canonical\n")
        for r in rows:
            fh.write("\t".join(str(x) for x in r) + "\n")
    print(f"{len(rows)} molecules", file=sys.stderr)


if __name__ == "__main__":
    main()
