// Copyright 2026 The Privscope Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

package main

import (
	"github.com/aws/aws-sdk-go/aws"
	"github.com/aws/aws-sdk-go/aws/session"
	"github.com/aws/aws-sdk-go/service/s3"
)

type Request struct {
	Bucket string
	Key    string
}

var svc = s3.New(session.Must(session.NewSession()))

func fetch(req Request) error {
	_, err := svc.GetObject(&s3.GetObjectInput{
		Bucket: aws.String(req.Bucket),
		Key:    aws.String("settings.json"),
	})
	return err
}
