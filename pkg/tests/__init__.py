# -*- coding: utf-8  -*-
